"""Lexer for BTScenario source text.

Produces a flat token stream with source spans. Interval literals
(``[lo:hi]`` or ``[lo,hi]``) and coordinate literals (``x@y``) are
recognized here via lookahead so the parser never has to disambiguate
them from guard brackets or plain numbers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """Location of a lexeme: 1-based line/column plus lexeme length."""

    line: int
    column: int
    length: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class TokenType(enum.Enum):
    # keywords
    SCENARIO = "scenario"
    MAP = "map"
    INIT = "init"
    EXECUTE = "execute"
    ORACLE = "oracle"
    SERIAL = "serial"
    PARALLEL = "parallel"
    PERIODIC = "periodic"
    RECORD = "record"
    WITH = "with"
    # actor kinds
    AUT_CAR = "Aut_Car"
    CAR = "Car"
    PEDESTRIAN = "Pedestrian"
    # map object kinds
    JUNCTION = "Junction"
    ROAD = "Road"
    LANE = "Lane"
    CROSSWALK = "Crosswalk"
    SIGNAL = "Signal"
    STOP_SIGN = "StopSign"
    YIELD_SIGN = "YieldSign"
    CLEAR_AREA = "ClearArea"
    SPEED_BUMP = "SpeedBump"
    PARKING_SPACE = "ParkingSpace"
    PNC_JUNCTION = "PncJunction"
    # literals
    NUMBER = "NUMBER"
    STRING = "STRING"
    INTERVAL = "INTERVAL"
    COORD = "COORD"
    IDENT = "IDENT"
    # punctuation / operators
    LBRACE = "{"
    RBRACE = "}"
    LPAREN = "("
    RPAREN = ")"
    LBRACKET = "["
    RBRACKET = "]"
    SEMI = ";"
    COMMA = ","
    COLON = ":"
    DOT = "."
    ASSIGN = "="
    EQ = "=="
    NE = "!="
    LT = "<"
    GT = ">"
    LE = "<="
    GE = ">="
    OR = "||"
    AND = "&&"
    MINUS = "-"
    EOF = "EOF"


KEYWORDS = {
    t.value: t
    for t in (
        TokenType.SCENARIO,
        TokenType.MAP,
        TokenType.INIT,
        TokenType.EXECUTE,
        TokenType.ORACLE,
        TokenType.SERIAL,
        TokenType.PARALLEL,
        TokenType.PERIODIC,
        TokenType.RECORD,
        TokenType.WITH,
        TokenType.AUT_CAR,
        TokenType.CAR,
        TokenType.PEDESTRIAN,
        TokenType.JUNCTION,
        TokenType.ROAD,
        TokenType.LANE,
        TokenType.CROSSWALK,
        TokenType.SIGNAL,
        TokenType.STOP_SIGN,
        TokenType.YIELD_SIGN,
        TokenType.CLEAR_AREA,
        TokenType.SPEED_BUMP,
        TokenType.PARKING_SPACE,
        TokenType.PNC_JUNCTION,
    )
}

ACTOR_KIND_TOKENS = (TokenType.AUT_CAR, TokenType.CAR, TokenType.PEDESTRIAN)

MAP_KIND_TOKENS = (
    TokenType.JUNCTION,
    TokenType.ROAD,
    TokenType.LANE,
    TokenType.CROSSWALK,
    TokenType.SIGNAL,
    TokenType.STOP_SIGN,
    TokenType.YIELD_SIGN,
    TokenType.CLEAR_AREA,
    TokenType.SPEED_BUMP,
    TokenType.PARKING_SPACE,
    TokenType.PNC_JUNCTION,
)


@dataclass(frozen=True)
class Token:
    type: TokenType
    value: object  # str for IDENT/STRING, float for NUMBER, tuple for INTERVAL/COORD
    span: SourceSpan

    def __repr__(self) -> str:  # compact, for parser error messages
        if self.type in (TokenType.IDENT, TokenType.STRING):
            return f"{self.type.name}({self.value})"
        if self.type is TokenType.NUMBER:
            return f"NUMBER({self.value})"
        return self.type.name


class LexError(Exception):
    """Illegal character or malformed literal."""

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


class _Scanner:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.line = 1
        self.column = 1

    def eof(self) -> bool:
        return self.pos >= len(self.source)

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.source[i] if i < len(self.source) else ""

    def advance(self) -> str:
        ch = self.source[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def span_here(self, length: int = 1) -> SourceSpan:
        return SourceSpan(self.line, self.column, length)


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> list[Token]:
    """Tokenize BTScenario source, ``//`` comments stripped.

    Raises LexError on the first illegal character.
    """
    sc = _Scanner(source)
    tokens: list[Token] = []

    while True:
        _skip_trivia(sc)
        if sc.eof():
            break
        ch = sc.peek()
        span = sc.span_here()

        if _is_ident_start(ch):
            name = _read_ident(sc)
            ttype = KEYWORDS.get(name, TokenType.IDENT)
            value = name if ttype is TokenType.IDENT else ttype.value
            tokens.append(Token(ttype, value, SourceSpan(span.line, span.column, len(name))))
        elif ch.isdigit():
            tokens.append(_read_number_or_coord(sc))
        elif ch == '"':
            tokens.append(_read_string(sc))
        elif ch == "[":
            tok = _try_read_interval(sc)
            if tok is None:
                sc.advance()
                tokens.append(Token(TokenType.LBRACKET, "[", span))
            else:
                tokens.append(tok)
        else:
            tokens.append(_read_operator(sc))

    tokens.append(Token(TokenType.EOF, None, sc.span_here(0)))
    return tokens


def _skip_trivia(sc: _Scanner) -> None:
    while not sc.eof():
        ch = sc.peek()
        if ch in " \t\r\n":
            sc.advance()
        elif ch == "/" and sc.peek(1) == "/":
            while not sc.eof() and sc.peek() != "\n":
                sc.advance()
        else:
            return


def _read_ident(sc: _Scanner) -> str:
    chars = []
    while not sc.eof() and _is_ident_char(sc.peek()):
        chars.append(sc.advance())
    return "".join(chars)


def _read_bare_number(sc: _Scanner) -> float:
    """Unsigned decimal at the cursor; caller guarantees a leading digit."""
    chars = []
    while not sc.eof() and sc.peek().isdigit():
        chars.append(sc.advance())
    if sc.peek() == "." and sc.peek(1).isdigit():
        chars.append(sc.advance())
        while not sc.eof() and sc.peek().isdigit():
            chars.append(sc.advance())
    return float("".join(chars))


def _read_number_or_coord(sc: _Scanner) -> Token:
    span = sc.span_here()
    value = _read_bare_number(sc)
    # `x@y` coordinate literal
    if sc.peek() == "@":
        sc.advance()
        sign = 1.0
        if sc.peek() == "-":
            sc.advance()
            sign = -1.0
        if not sc.peek().isdigit():
            raise LexError("expected number after '@'", sc.span_here())
        y = sign * _read_bare_number(sc)
        length = sc.column - span.column if sc.line == span.line else 1
        return Token(TokenType.COORD, (value, y), SourceSpan(span.line, span.column, length))
    length = sc.column - span.column if sc.line == span.line else 1
    return Token(TokenType.NUMBER, value, SourceSpan(span.line, span.column, length))


def _read_string(sc: _Scanner) -> Token:
    span = sc.span_here()
    sc.advance()  # opening quote
    chars = []
    while True:
        if sc.eof() or sc.peek() == "\n":
            raise LexError("unterminated string literal", span)
        ch = sc.advance()
        if ch == '"':
            break
        chars.append(ch)
    text = "".join(chars)
    return Token(TokenType.STRING, text, SourceSpan(span.line, span.column, len(text) + 2))


def _try_read_interval(sc: _Scanner) -> Token | None:
    """Lookahead for ``[lo:hi]`` / ``[lo,hi]`` with optional signs and spaces.

    Returns None (cursor untouched) when the brackets hold anything else,
    e.g. a guard condition.
    """
    src, start = sc.source, sc.pos
    i = start + 1  # past '['

    def skip_ws(j: int) -> int:
        while j < len(src) and src[j] in " \t":
            j += 1
        return j

    def scan_number(j: int) -> tuple[float, int] | None:
        k = j
        if k < len(src) and src[k] == "-":
            k += 1
        d0 = k
        while k < len(src) and src[k].isdigit():
            k += 1
        if k == d0:
            return None
        if k < len(src) and src[k] == "." and k + 1 < len(src) and src[k + 1].isdigit():
            k += 1
            while k < len(src) and src[k].isdigit():
                k += 1
        return float(src[j:k]), k

    i = skip_ws(i)
    lo_scan = scan_number(i)
    if lo_scan is None:
        return None
    lo, i = lo_scan
    i = skip_ws(i)
    if i >= len(src) or src[i] not in ":,":
        return None
    i = skip_ws(i + 1)
    hi_scan = scan_number(i)
    if hi_scan is None:
        return None
    hi, i = hi_scan
    i = skip_ws(i)
    if i >= len(src) or src[i] != "]":
        return None
    i += 1

    span = sc.span_here(i - start)
    while sc.pos < i:  # consume through ']' keeping line/col bookkeeping
        sc.advance()
    return Token(TokenType.INTERVAL, (lo, hi), span)


_TWO_CHAR_OPS = {
    "==": TokenType.EQ,
    "!=": TokenType.NE,
    "<=": TokenType.LE,
    ">=": TokenType.GE,
    "||": TokenType.OR,
    "&&": TokenType.AND,
}

_ONE_CHAR_OPS = {
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    "]": TokenType.RBRACKET,
    ";": TokenType.SEMI,
    ",": TokenType.COMMA,
    ":": TokenType.COLON,
    ".": TokenType.DOT,
    "=": TokenType.ASSIGN,
    "<": TokenType.LT,
    ">": TokenType.GT,
    "-": TokenType.MINUS,
}


def _read_operator(sc: _Scanner) -> Token:
    span = sc.span_here()
    two = sc.peek() + sc.peek(1)
    if two in _TWO_CHAR_OPS:
        sc.advance()
        sc.advance()
        return Token(_TWO_CHAR_OPS[two], two, SourceSpan(span.line, span.column, 2))
    ch = sc.peek()
    if ch in _ONE_CHAR_OPS:
        sc.advance()
        return Token(_ONE_CHAR_OPS[ch], ch, span)
    raise LexError(f"illegal character {ch!r}", span)
