"""Canonical pretty-printer; parse(pretty_print(ast)) reproduces the AST."""

from __future__ import annotations

from . import ast


def _fmt_num(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _fmt_literal(value: object) -> str:
    if isinstance(value, float):
        return _fmt_num(value)
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, tuple):
        return f"{_fmt_num(value[0])}@{_fmt_num(value[1])}"
    if isinstance(value, ast.Interval):
        return f"[{_fmt_num(value.lo)}:{_fmt_num(value.hi)}]"
    if isinstance(value, ast.Text):
        return value.value
    raise TypeError(f"unprintable literal {value!r}")


def _fmt_path(path: list[object]) -> str:
    parts: list[str] = []
    for item in path:
        if isinstance(item, int):
            parts[-1] += f"[{item}]"
        else:
            parts.append(str(item))
    return ".".join(parts)


def format_condition(expr: ast.CondExpr) -> str:
    if isinstance(expr, ast.BoolOp):
        return f"({format_condition(expr.left)} {expr.op} {format_condition(expr.right)})"
    if isinstance(expr, ast.Compare):
        return f"{format_condition(expr.left)} {expr.op} {format_condition(expr.right)}"
    if isinstance(expr, ast.DistanceCall):
        return f"distance({expr.left}, {expr.right})"
    if isinstance(expr, ast.AttrRead):
        return f"{expr.actor}.{expr.attr}"
    if isinstance(expr, ast.CollidedCall):
        return f"{expr.actor}.isCollided()"
    if isinstance(expr, ast.NumberLit):
        return _fmt_num(expr.value)
    if isinstance(expr, ast.IntervalLit):
        return f"[{_fmt_num(expr.lo)}:{_fmt_num(expr.hi)}]"
    raise TypeError(f"unprintable condition {expr!r}")


def _fmt_param(p: ast.ParamBinding) -> str:
    if isinstance(p.value, ast.Fixed):
        return f"{p.name}={_fmt_num(p.value.value)}"
    if isinstance(p.value, ast.Interval):
        return f"{p.name}=[{_fmt_num(p.value.lo)}:{_fmt_num(p.value.hi)}]"
    return f'{p.name}="{p.value.value}"'


def _emit_bt(node: ast.BtAstNode, lines: list[str], indent: int) -> None:
    pad = "    " * indent
    if isinstance(node, ast.ActionLeaf):
        pre = f"[{format_condition(node.pre)}] " if node.pre else ""
        post = f" [{format_condition(node.post)}]" if node.post else ""
        params = ", ".join(_fmt_param(p) for p in node.params)
        lines.append(f"{pad}{pre}{node.actor}.{node.action}({params}){post};")
        return
    keyword = "serial" if isinstance(node, ast.Serial) else "parallel"
    lines.append(f"{pad}{keyword}(){{")
    for child in node.children:
        _emit_bt(child, lines, indent + 1)
    lines.append(f"{pad}}}")


def _fmt_position(pos: ast.PositionSpec) -> list[str]:
    if isinstance(pos, ast.AbsoluteLane):
        return [f"absolute_position == {pos.lane}"]
    if isinstance(pos, ast.CoordinatePos):
        return [f"absolute_position == {_fmt_num(pos.x)}@{_fmt_num(pos.y)}"]
    if isinstance(pos, ast.RelativePos):
        return [
            f"relative_to == {pos.anchor}",
            f"angle == {_fmt_num(pos.angle)}",
            f"front_distance == {_fmt_num(pos.front_distance)}",
        ]
    return []


def pretty_print(scenario: ast.ScenarioAst) -> str:
    lines = [f"scenario {scenario.name}(){{"]

    lines.append("    map{")
    for decl in scenario.map_block:
        constraints = ", ".join(
            f'"{c.value}"' if c.is_shorthand else f"{_fmt_path(c.path)} == {_fmt_literal(c.value)}"
            for c in decl.constraints
        )
        suffix = f" with {constraints}" if constraints else ""
        lines.append(f"        {decl.object_kind.value} {decl.name}{suffix};")
    lines.append("    }")

    lines.append("    init{")
    for actor in scenario.init_block:
        parts = [f"{k} == {_fmt_literal(v)}" for k, v in actor.attributes.items()]
        parts += _fmt_position(actor.position)
        suffix = f" with {', '.join(parts)}" if parts else ""
        lines.append(f"        {actor.actor_kind.value} {actor.name}{suffix};")
    lines.append("    }")

    lines.append("    execute{")
    _emit_bt(scenario.execute_block, lines, 2)
    lines.append("    }")

    lines.append("    oracle{")
    for decl in scenario.oracle_block:
        if decl.kind is ast.OracleKind.PERIODIC:
            lines.append(f"        periodic: {format_condition(decl.expr)};")
        else:
            actor, attr = decl.channel
            lines.append(f"        record: {actor}.{attr};")
    lines.append("    }")

    lines.append("}")
    return "\n".join(lines) + "\n"
