"""Semantic validation of parsed scenarios.

The parser accepts any identifier as an action or attribute; everything
vocabulary-level is enforced here against the built-in action library so
that a typo produces one precise diagnostic instead of a parse failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import ast
from .parser import Diagnostic
from .tokens import SourceSpan

# Channels the simulator can evaluate for record oracles and attribute reads.
SIMULABLE_CHANNELS = ("speed", "x", "y", "heading")


@dataclass(frozen=True)
class ParamSpec:
    kind: str  # "speed" | "length" | "choice"
    default: object = None
    choices: tuple[str, ...] = ()
    required: bool = False


# Built-in action library. `scale` and `distance` name the same
# longitudinal length in meters; speeds are km/h by default (config flag).
ACTION_SCHEMAS: dict[str, dict[str, ParamSpec]] = {
    "followLane": {
        "targetSpeed": ParamSpec("speed", default=30.0),
        "distance": ParamSpec("length", default=50.0),
    },
    "changeLane": {
        "direction": ParamSpec("choice", choices=("left", "right"), required=True),
        "targetSpeed": ParamSpec("speed", default=30.0),
        "scale": ParamSpec("length", default=50.0),
    },
}

# alias -> canonical name, applies to every action
PARAM_ALIASES = {"scale": "distance", "distance": "scale"}


def canonical_param(action: str, name: str) -> str | None:
    schema = ACTION_SCHEMAS.get(action)
    if schema is None:
        return None
    if name in schema:
        return name
    alias = PARAM_ALIASES.get(name)
    if alias in schema:
        return alias
    return None


@dataclass
class ValidatedScenario:
    """A scenario that passed validation, plus the lookups the runtime needs."""

    ast: ast.ScenarioAst
    actors: dict[str, ast.ActorDecl]
    source_path: Optional[str] = None

    @property
    def name(self) -> str:
        return self.ast.name

    @property
    def ego_name(self) -> str:
        for decl in self.ast.init_block:
            if decl.actor_kind is ast.ActorKind.AUT_CAR:
                return decl.name
        raise LookupError("no car under test")

    @property
    def steps_total(self) -> int:
        return len(ast.root_children(self.ast))


@dataclass
class ValidationResult:
    scenario: Optional[ValidatedScenario]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.scenario is not None


def validate(scenario: ast.ScenarioAst, road_map=None, source_path: str | None = None) -> ValidationResult:
    """Check a parsed scenario; with a map, also check map-object matching."""
    checker = _Checker(scenario)
    checker.run()
    if road_map is not None:
        from ..mapmodel import NoMatch, match_map_objects

        try:
            match_map_objects(scenario.map_block, road_map)
        except NoMatch as err:
            checker.error(err.span or scenario.span, str(err))
    diags = checker.diagnostics
    if any(d.severity == "error" for d in diags):
        return ValidationResult(None, diags)
    return ValidationResult(ValidatedScenario(scenario, checker.actors, source_path), diags)


class _Checker:
    def __init__(self, scenario: ast.ScenarioAst):
        self.scenario = scenario
        self.diagnostics: list[Diagnostic] = []
        self.actors: dict[str, ast.ActorDecl] = {}
        self.map_names: dict[str, ast.MapDecl] = {}

    def error(self, span: SourceSpan, message: str) -> None:
        self.diagnostics.append(Diagnostic("error", span, message))

    def warn(self, span: SourceSpan, message: str) -> None:
        self.diagnostics.append(Diagnostic("warning", span, message))

    def run(self) -> None:
        self.check_map_block()
        self.check_init_block()
        self.check_execute(self.scenario.execute_block, is_root=True)
        self.check_oracles()

    # -- map ----------------------------------------------------------------

    def check_map_block(self) -> None:
        for decl in self.scenario.map_block:
            if decl.name in self.map_names:
                self.error(decl.span, f"duplicate map object name '{decl.name}'")
            self.map_names[decl.name] = decl
            for constraint in decl.constraints:
                if isinstance(constraint.value, ast.Interval):
                    self.error(constraint.span, "interval values are not allowed in map constraints")
                if (
                    decl.object_kind is ast.MapObjectKind.JUNCTION
                    and constraint.path == ["type"]
                    and constraint.value not in ast.JUNCTION_TYPES
                ):
                    allowed = ", ".join(f'"{t}"' for t in ast.JUNCTION_TYPES)
                    self.error(
                        constraint.span,
                        f"junction type {constraint.value!r} is not one of {allowed}",
                    )

    # -- init ---------------------------------------------------------------

    def check_init_block(self) -> None:
        aut_cars = []
        for decl in self.scenario.init_block:
            if decl.name in self.actors:
                self.error(decl.span, f"duplicate actor name '{decl.name}'")
            if decl.name in self.map_names:
                self.error(decl.span, f"actor name '{decl.name}' collides with a map object")
            if decl.actor_kind is ast.ActorKind.AUT_CAR:
                aut_cars.append(decl)
            for key, value in decl.attributes.items():
                if isinstance(value, ast.Interval):
                    self.error(decl.span, f"interval value for attribute '{key}' is not allowed in init")
            self.check_position(decl)
            self.actors[decl.name] = decl

        if not aut_cars:
            self.error(self.scenario.span, "no car under test (Aut_Car) declared")
        elif len(aut_cars) > 1:
            for decl in aut_cars[1:]:
                self.error(decl.span, "multiple cars under test; exactly one Aut_Car is allowed")

    def check_position(self, decl: ast.ActorDecl) -> None:
        pos = decl.position
        if isinstance(pos, ast.AbsoluteLane):
            target = self.map_names.get(pos.lane)
            if target is None:
                self.error(decl.span, f"absolute_position refers to unknown map object '{pos.lane}'")
            elif target.object_kind is not ast.MapObjectKind.LANE:
                self.error(decl.span, f"absolute_position must name a Lane, not a {target.object_kind.value}")
        elif isinstance(pos, ast.RelativePos):
            if pos.anchor not in self.actors:
                self.error(
                    decl.span,
                    f"relative_to anchor '{pos.anchor}' is not declared before '{decl.name}'",
                )

    # -- execute ------------------------------------------------------------

    def check_execute(self, node: ast.BtAstNode, is_root: bool = False) -> None:
        if isinstance(node, (ast.Serial, ast.Parallel)):
            if not node.children:
                kind = "serial" if isinstance(node, ast.Serial) else "parallel"
                self.error(node.span, f"{kind} composite must have at least one child")
            for child in node.children:
                self.check_execute(child)
            return
        self.check_leaf(node)

    def check_leaf(self, leaf: ast.ActionLeaf) -> None:
        actor = self.actors.get(leaf.actor)
        if actor is None:
            self.error(leaf.span, f"unknown actor '{leaf.actor}'")
        elif actor.actor_kind is ast.ActorKind.AUT_CAR:
            self.error(
                leaf.span,
                f"'{leaf.actor}' is the car under test and cannot be scripted; "
                "it is driven by the system under test",
            )
        elif actor.actor_kind is ast.ActorKind.PEDESTRIAN:
            self.error(leaf.span, f"pedestrian '{leaf.actor}' cannot perform car actions")

        schema = ACTION_SCHEMAS.get(leaf.action)
        if schema is None:
            known = ", ".join(sorted(ACTION_SCHEMAS))
            self.error(leaf.span, f"unknown action '{leaf.action}' (known actions: {known})")
        else:
            seen: set[str] = set()
            for param in leaf.params:
                canonical = canonical_param(leaf.action, param.name)
                if canonical is None:
                    self.error(param.span, f"'{leaf.action}' has no parameter '{param.name}'")
                    continue
                if canonical in seen:
                    self.error(param.span, f"duplicate parameter '{param.name}'")
                seen.add(canonical)
                self.check_param_value(leaf.action, canonical, param)
            for name, spec in schema.items():
                if spec.required and name not in seen:
                    self.error(leaf.span, f"'{leaf.action}' requires parameter '{name}'")

        if leaf.pre is not None:
            self.check_condition(leaf.pre, require_boolean=True)
        if leaf.post is not None:
            self.check_condition(leaf.post, require_boolean=True)

    def check_param_value(self, action: str, canonical: str, param: ast.ParamBinding) -> None:
        spec = ACTION_SCHEMAS[action][canonical]
        value = param.value
        if spec.kind == "choice":
            if not isinstance(value, ast.Text) or value.value not in spec.choices:
                allowed = " or ".join(f'"{c}"' for c in spec.choices)
                self.error(param.span, f"parameter '{param.name}' must be {allowed}")
            return
        if isinstance(value, ast.Text):
            self.error(param.span, f"parameter '{param.name}' must be a number or interval")
            return
        if isinstance(value, ast.Interval) and value.lo > value.hi:
            self.error(param.span, f"interval bounds reversed: [{value.lo}:{value.hi}]")
        if spec.kind == "length":
            bound = value if isinstance(value, ast.Fixed) else ast.Fixed(value.lo)
            if isinstance(value, ast.Fixed) and value.value < 0:
                self.error(param.span, f"parameter '{param.name}' must be non-negative")
            elif isinstance(value, ast.Interval) and value.lo < 0:
                self.error(param.span, f"parameter '{param.name}' must be non-negative")

    # -- conditions -----------------------------------------------------------

    def check_condition(self, expr: ast.CondExpr, require_boolean: bool) -> None:
        if require_boolean and not self._is_boolean(expr):
            span = getattr(expr, "span", self.scenario.span)
            self.error(span, "condition must be boolean (a comparison, &&/||, or isCollided())")
        self._walk_condition(expr)

    def _is_boolean(self, expr: ast.CondExpr) -> bool:
        return isinstance(expr, (ast.Compare, ast.BoolOp, ast.CollidedCall))

    def _walk_condition(self, expr: ast.CondExpr) -> None:
        if isinstance(expr, ast.BoolOp):
            for side in (expr.left, expr.right):
                if not self._is_boolean(side):
                    self.error(expr.span, f"operand of '{expr.op}' must be boolean")
                self._walk_condition(side)
        elif isinstance(expr, ast.Compare):
            for side in (expr.left, expr.right):
                if self._is_boolean(side) and not isinstance(side, ast.CollidedCall):
                    self.error(expr.span, "comparison operands must be numeric")
                self._walk_condition(side)
        elif isinstance(expr, ast.DistanceCall):
            for name in (expr.left, expr.right):
                if name not in self.actors:
                    self.error(expr.span, f"unknown actor '{name}' in distance()")
        elif isinstance(expr, ast.AttrRead):
            if expr.actor not in self.actors:
                self.error(expr.span, f"unknown actor '{expr.actor}'")
            if expr.attr not in SIMULABLE_CHANNELS:
                channels = ", ".join(SIMULABLE_CHANNELS)
                self.error(expr.span, f"unknown attribute '{expr.attr}' (simulable: {channels})")
        elif isinstance(expr, ast.CollidedCall):
            if expr.actor not in self.actors:
                self.error(expr.span, f"unknown actor '{expr.actor}'")
        elif isinstance(expr, ast.IntervalLit):
            if expr.lo > expr.hi:
                self.error(expr.span, f"interval bounds reversed: [{expr.lo}:{expr.hi}]")

    # -- oracles --------------------------------------------------------------

    def check_oracles(self) -> None:
        for decl in self.scenario.oracle_block:
            if decl.kind is ast.OracleKind.PERIODIC:
                self.check_condition(decl.expr, require_boolean=True)
            else:
                actor, attr = decl.channel
                if actor not in self.actors:
                    self.error(decl.span, f"unknown actor '{actor}' in record oracle")
                if attr not in SIMULABLE_CHANNELS:
                    channels = ", ".join(SIMULABLE_CHANNELS)
                    self.error(decl.span, f"'{attr}' is not a simulable channel ({channels})")
