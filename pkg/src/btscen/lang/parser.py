"""Recursive-descent parser for BTScenario.

The parser is deliberately permissive about vocabulary: any identifier is
accepted as an action or attribute name and the validator enforces the
action schema afterwards, which keeps diagnostics specific ("unknown
action 'fly'") instead of generic syntax errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ast
from .tokens import (
    ACTOR_KIND_TOKENS,
    MAP_KIND_TOKENS,
    LexError,
    SourceSpan,
    Token,
    TokenType,
    tokenize,
)


@dataclass
class Diagnostic:
    severity: str  # "error" | "warning"
    span: SourceSpan
    message: str

    def render(self, path: str = "<input>") -> str:
        return f"{path}:{self.span.line}:{self.span.column}: {self.severity}: {self.message}"

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "line": self.span.line,
            "column": self.span.column,
            "length": self.span.length,
            "message": self.message,
        }


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected: tuple[TokenType, ...] = ()):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span
        self.expected = expected


@dataclass
class ParseResult:
    ast: ast.ScenarioAst | None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.ast is not None and not any(d.severity == "error" for d in self.diagnostics)


def parse(source: str) -> ParseResult:
    """Parse a scenario, collecting as many diagnostics as recovery allows."""
    try:
        tokens = tokenize(source)
    except LexError as err:
        return ParseResult(None, [Diagnostic("error", err.span, err.message)])
    parser = _Parser(tokens)
    return parser.parse_scenario()


def parse_strict(source: str) -> ast.ScenarioAst:
    """Parse and raise ParseError on the first error (library convenience)."""
    result = parse(source)
    errors = [d for d in result.diagnostics if d.severity == "error"]
    if errors or result.ast is None:
        first = errors[0] if errors else Diagnostic("error", SourceSpan(1, 1, 0), "empty input")
        raise ParseError(first.message, first.span)
    return result.ast


_ACTOR_KINDS = {
    TokenType.AUT_CAR: ast.ActorKind.AUT_CAR,
    TokenType.CAR: ast.ActorKind.CAR,
    TokenType.PEDESTRIAN: ast.ActorKind.PEDESTRIAN,
}

_MAP_KINDS = {t: ast.MapObjectKind(t.value) for t in MAP_KIND_TOKENS}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, *types: TokenType) -> bool:
        return self.peek().type in types

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type is not TokenType.EOF:
            self.pos += 1
        return tok

    def expect(self, ttype: TokenType, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.type is not ttype:
            desc = what or f"'{ttype.value}'"
            raise ParseError(f"expected {desc}, found {tok!r}", tok.span, (ttype,))
        return self.advance()

    def error_here(self, message: str, expected: tuple[TokenType, ...] = ()) -> ParseError:
        return ParseError(message, self.peek().span, expected)

    def report(self, err: ParseError) -> None:
        self.diagnostics.append(Diagnostic("error", err.span, err.message))

    def recover_to(self, *types: TokenType) -> None:
        """Skip forward past the next token of any given type (or stop at EOF/'}')."""
        while not self.at(TokenType.EOF):
            if self.at(*types):
                self.advance()
                return
            if self.at(TokenType.RBRACE):
                return
            self.advance()

    # -- grammar -----------------------------------------------------------

    def parse_scenario(self) -> ParseResult:
        try:
            start = self.expect(TokenType.SCENARIO).span
            name = self.expect(TokenType.IDENT, "scenario name").value
            self.expect(TokenType.LPAREN)
            self.expect(TokenType.RPAREN)
            self.expect(TokenType.LBRACE)

            map_block = self.parse_map_block()
            init_block = self.parse_init_block()
            execute_block = self.parse_execute_block()
            oracle_block = self.parse_oracle_block()

            self.expect(TokenType.RBRACE)
            scenario = ast.ScenarioAst(
                name=str(name),
                map_block=map_block,
                init_block=init_block,
                execute_block=execute_block,
                oracle_block=oracle_block,
                span=start,
            )
        except ParseError as err:
            self.report(err)
            return ParseResult(None, self.diagnostics)
        if not self.at(TokenType.EOF):
            # tolerate a stray trailing '}' (seen in hand-written files)
            if self.at(TokenType.RBRACE):
                self.advance()
            if not self.at(TokenType.EOF):
                self.report(self.error_here("unexpected input after scenario"))
        return ParseResult(scenario, self.diagnostics)

    def parse_map_block(self) -> list[ast.MapDecl]:
        self.expect(TokenType.MAP)
        self.expect(TokenType.LBRACE)
        decls: list[ast.MapDecl] = []
        while not self.at(TokenType.RBRACE, TokenType.EOF):
            try:
                decls.append(self.parse_map_decl())
            except ParseError as err:
                self.report(err)
                self.recover_to(TokenType.SEMI)
        self.expect(TokenType.RBRACE)
        return decls

    def parse_map_decl(self) -> ast.MapDecl:
        tok = self.peek()
        kind = _MAP_KINDS.get(tok.type)
        if kind is None:
            raise self.error_here(f"expected map object kind, found {tok!r}", MAP_KIND_TOKENS)
        self.advance()
        name = self.expect(TokenType.IDENT, "map object name")
        constraints: list[ast.ConstraintExpr] = []
        if self.at(TokenType.WITH):
            self.advance()
            constraints.append(self.parse_constraint())
            while self.at(TokenType.COMMA):
                self.advance()
                constraints.append(self.parse_constraint())
        self.expect(TokenType.SEMI)
        return ast.MapDecl(kind, str(name.value), constraints, name.span)

    def parse_constraint(self) -> ast.ConstraintExpr:
        tok = self.peek()
        if tok.type is TokenType.STRING:
            self.advance()
            return ast.ConstraintExpr(["kind"], tok.value, tok.span, is_shorthand=True)
        path = self.parse_attr_path()
        self.expect(TokenType.EQ)
        value = self.parse_literal()
        return ast.ConstraintExpr(path, value, tok.span)

    def parse_attr_path(self) -> list[object]:
        path: list[object] = []
        name = self.expect(TokenType.IDENT, "attribute name")
        path.append(str(name.value))
        while True:
            if self.at(TokenType.LBRACKET):
                self.advance()
                idx = self.expect(TokenType.NUMBER, "index")
                self.expect(TokenType.RBRACKET)
                path.append(int(idx.value))
            elif self.at(TokenType.DOT):
                self.advance()
                part = self.expect(TokenType.IDENT, "attribute name")
                path.append(str(part.value))
            else:
                return path

    def parse_literal(self) -> object:
        tok = self.peek()
        if tok.type is TokenType.NUMBER:
            self.advance()
            return float(tok.value)
        if tok.type is TokenType.MINUS and self.peek(1).type is TokenType.NUMBER:
            self.advance()
            return -float(self.advance().value)
        if tok.type is TokenType.STRING:
            self.advance()
            return str(tok.value)
        if tok.type is TokenType.COORD:
            self.advance()
            return tuple(tok.value)
        if tok.type is TokenType.INTERVAL:
            self.advance()
            return ast.Interval(*tok.value)
        if tok.type is TokenType.IDENT:
            self.advance()
            return ast.Text(str(tok.value))  # name reference (e.g. a lane)
        raise self.error_here(f"expected literal, found {tok!r}")

    def parse_init_block(self) -> list[ast.ActorDecl]:
        self.expect(TokenType.INIT)
        self.expect(TokenType.LBRACE)
        decls: list[ast.ActorDecl] = []
        while not self.at(TokenType.RBRACE, TokenType.EOF):
            try:
                decls.append(self.parse_actor_decl())
            except ParseError as err:
                self.report(err)
                self.recover_to(TokenType.SEMI)
        self.expect(TokenType.RBRACE)
        return decls

    def parse_actor_decl(self) -> ast.ActorDecl:
        tok = self.peek()
        kind = _ACTOR_KINDS.get(tok.type)
        if kind is None:
            raise self.error_here(f"expected actor kind, found {tok!r}", ACTOR_KIND_TOKENS)
        self.advance()
        name = self.expect(TokenType.IDENT, "actor name")
        attributes: dict[str, object] = {}
        if self.at(TokenType.WITH):
            self.advance()
            self.parse_actor_constraint(attributes)
            while self.at(TokenType.COMMA):
                self.advance()
                self.parse_actor_constraint(attributes)
        self.expect(TokenType.SEMI)
        position = self.build_position(attributes, name.span)
        return ast.ActorDecl(kind, str(name.value), attributes, position, name.span)

    def parse_actor_constraint(self, attributes: dict[str, object]) -> None:
        key = self.expect(TokenType.IDENT, "attribute name")
        self.expect(TokenType.EQ)
        value = self.parse_literal()
        if key.value in attributes:
            self.report(ParseError(f"duplicate attribute '{key.value}'", key.span))
        attributes[str(key.value)] = value

    def build_position(self, attributes: dict[str, object], span: SourceSpan) -> ast.PositionSpec:
        """Pull the position-defining attributes out of the `with` constraints."""
        if "absolute_position" in attributes:
            target = attributes.pop("absolute_position")
            if "relative_to" in attributes:
                self.report(ParseError("actor has both absolute and relative position", span))
            if isinstance(target, tuple):
                return ast.CoordinatePos(target[0], target[1])
            if isinstance(target, ast.Text):
                return ast.AbsoluteLane(target.value)
            self.report(ParseError("absolute_position must be a lane name or x@y point", span))
            return ast.DefaultPos()
        if "relative_to" in attributes:
            anchor = attributes.pop("relative_to")
            if not isinstance(anchor, ast.Text):
                self.report(ParseError("relative_to must name an actor", span))
                return ast.DefaultPos()
            angle = attributes.pop("angle", 0.0)
            front = attributes.pop("front_distance", 0.0)
            if not isinstance(angle, float) or not isinstance(front, float):
                self.report(ParseError("angle and front_distance must be numbers", span))
                return ast.DefaultPos()
            return ast.RelativePos(anchor.value, angle, front)
        return ast.DefaultPos()

    def parse_execute_block(self) -> ast.BtAstNode:
        self.expect(TokenType.EXECUTE)
        brace = self.expect(TokenType.LBRACE)
        stmts: list[ast.BtAstNode] = []
        while not self.at(TokenType.RBRACE, TokenType.EOF):
            try:
                stmts.append(self.parse_bt_stmt())
            except ParseError as err:
                self.report(err)
                self.recover_to(TokenType.SEMI)
        self.expect(TokenType.RBRACE)
        if len(stmts) == 1 and isinstance(stmts[0], (ast.Serial, ast.Parallel)):
            return stmts[0]
        # bare statements: wrap into an implicit serial root
        return ast.Serial(stmts, brace.span)

    def parse_bt_stmt(self) -> ast.BtAstNode:
        if self.at(TokenType.SERIAL, TokenType.PARALLEL):
            return self.parse_composite()
        return self.parse_guarded_call()

    def parse_composite(self) -> ast.BtAstNode:
        head = self.advance()
        if self.at(TokenType.LPAREN):  # serial(){...} and serial{...} both allowed
            self.advance()
            self.expect(TokenType.RPAREN)
        self.expect(TokenType.LBRACE)
        children: list[ast.BtAstNode] = []
        while not self.at(TokenType.RBRACE, TokenType.EOF):
            try:
                children.append(self.parse_bt_stmt())
            except ParseError as err:
                self.report(err)
                self.recover_to(TokenType.SEMI)
        self.expect(TokenType.RBRACE)
        if self.at(TokenType.SEMI):  # optional trailing ';'
            self.advance()
        cls = ast.Serial if head.type is TokenType.SERIAL else ast.Parallel
        return cls(children, head.span)

    def parse_guarded_call(self) -> ast.ActionLeaf:
        pre = None
        if self.at(TokenType.LBRACKET):
            self.advance()
            pre = self.parse_condition()
            self.expect(TokenType.RBRACKET)

        actor = self.expect(TokenType.IDENT, "actor name")
        self.expect(TokenType.DOT)
        action = self.expect(TokenType.IDENT, "action name")
        self.expect(TokenType.LPAREN)
        params: list[ast.ParamBinding] = []
        if not self.at(TokenType.RPAREN):
            params.append(self.parse_param())
            while self.at(TokenType.COMMA):
                self.advance()
                params.append(self.parse_param())
        self.expect(TokenType.RPAREN)

        post = None
        if self.at(TokenType.LBRACKET):
            self.advance()
            post = self.parse_condition()
            self.expect(TokenType.RBRACKET)
        self.expect(TokenType.SEMI)
        return ast.ActionLeaf(
            actor=str(actor.value),
            action=str(action.value),
            params=params,
            pre=pre,
            post=post,
            span=actor.span,
        )

    def parse_param(self) -> ast.ParamBinding:
        name = self.expect(TokenType.IDENT, "parameter name")
        self.expect(TokenType.ASSIGN, "'='")
        tok = self.peek()
        if tok.type is TokenType.NUMBER:
            self.advance()
            value: ast.ParamValue = ast.Fixed(float(tok.value))
        elif tok.type is TokenType.MINUS and self.peek(1).type is TokenType.NUMBER:
            self.advance()
            value = ast.Fixed(-float(self.advance().value))
        elif tok.type is TokenType.INTERVAL:
            self.advance()
            value = ast.Interval(*tok.value)
        elif tok.type is TokenType.STRING:
            self.advance()
            value = ast.Text(str(tok.value))
        else:
            raise self.error_here(f"expected parameter value, found {tok!r}")
        return ast.ParamBinding(str(name.value), value, name.span)

    def parse_oracle_block(self) -> list[ast.OracleDecl]:
        self.expect(TokenType.ORACLE)
        self.expect(TokenType.LBRACE)
        decls: list[ast.OracleDecl] = []
        while not self.at(TokenType.RBRACE, TokenType.EOF):
            try:
                decls.append(self.parse_oracle_decl())
            except ParseError as err:
                self.report(err)
                self.recover_to(TokenType.SEMI)
        self.expect(TokenType.RBRACE)
        return decls

    def parse_oracle_decl(self) -> ast.OracleDecl:
        tok = self.peek()
        if tok.type is TokenType.PERIODIC:
            self.advance()
            self.expect(TokenType.COLON)
            expr = self.parse_condition()
            self.expect(TokenType.SEMI)
            return ast.OracleDecl(ast.OracleKind.PERIODIC, expr, None, tok.span)
        if tok.type is TokenType.RECORD:
            self.advance()
            self.expect(TokenType.COLON)
            actor = self.expect(TokenType.IDENT, "actor name")
            self.expect(TokenType.DOT)
            attr = self.expect(TokenType.IDENT, "channel name")
            self.expect(TokenType.SEMI)
            channel = (str(actor.value), str(attr.value))
            return ast.OracleDecl(ast.OracleKind.RECORD, None, channel, tok.span)
        raise self.error_here(
            f"expected 'periodic' or 'record', found {tok!r}",
            (TokenType.PERIODIC, TokenType.RECORD),
        )

    # -- conditions ---------------------------------------------------------

    def parse_condition(self) -> ast.CondExpr:
        return self.parse_or()

    def parse_or(self) -> ast.CondExpr:
        left = self.parse_and()
        while self.at(TokenType.OR):
            op = self.advance()
            right = self.parse_and()
            left = ast.BoolOp("||", left, right, op.span)
        return left

    def parse_and(self) -> ast.CondExpr:
        left = self.parse_comparison()
        while self.at(TokenType.AND):
            op = self.advance()
            right = self.parse_comparison()
            left = ast.BoolOp("&&", left, right, op.span)
        return left

    def parse_comparison(self) -> ast.CondExpr:
        left = self.parse_cond_primary()
        tok = self.peek()
        if tok.type in (TokenType.LT, TokenType.GT, TokenType.EQ):
            self.advance()
            right = self.parse_cond_primary()
            return ast.Compare(str(tok.value), left, right, tok.span)
        if tok.type in (TokenType.LE, TokenType.GE, TokenType.NE):
            raise ParseError(f"comparison '{tok.value}' is not supported; use <, > or ==", tok.span)
        return left

    def parse_cond_primary(self) -> ast.CondExpr:
        tok = self.peek()
        if tok.type is TokenType.LPAREN:
            self.advance()
            inner = self.parse_or()
            self.expect(TokenType.RPAREN)
            return inner
        if tok.type is TokenType.NUMBER:
            self.advance()
            return ast.NumberLit(float(tok.value), tok.span)
        if tok.type is TokenType.MINUS and self.peek(1).type is TokenType.NUMBER:
            self.advance()
            num = self.advance()
            return ast.NumberLit(-float(num.value), tok.span)
        if tok.type is TokenType.INTERVAL:
            self.advance()
            return ast.IntervalLit(tok.value[0], tok.value[1], tok.span)
        if tok.type is TokenType.IDENT:
            name = self.advance()
            if self.at(TokenType.LPAREN):  # function call: distance(a, b)
                self.advance()
                args = []
                if not self.at(TokenType.RPAREN):
                    args.append(str(self.expect(TokenType.IDENT, "actor name").value))
                    while self.at(TokenType.COMMA):
                        self.advance()
                        args.append(str(self.expect(TokenType.IDENT, "actor name").value))
                self.expect(TokenType.RPAREN)
                if name.value != "distance" or len(args) != 2:
                    raise ParseError(
                        f"unknown condition function '{name.value}' with {len(args)} argument(s)",
                        name.span,
                    )
                return ast.DistanceCall(args[0], args[1], name.span)
            if self.at(TokenType.DOT):
                self.advance()
                attr = self.expect(TokenType.IDENT, "attribute name")
                if self.at(TokenType.LPAREN):  # method call: actor.isCollided()
                    self.advance()
                    self.expect(TokenType.RPAREN)
                    if attr.value != "isCollided":
                        raise ParseError(f"unknown condition method '{attr.value}'", attr.span)
                    return ast.CollidedCall(str(name.value), name.span)
                return ast.AttrRead(str(name.value), str(attr.value), name.span)
            raise ParseError(f"bare identifier '{name.value}' is not a condition", name.span)
        raise self.error_here(f"expected condition, found {tok!r}")
