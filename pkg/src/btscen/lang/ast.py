"""Typed AST for BTScenario.

Every node keeps the span of the token that introduced it so that
diagnostics and parameter slots can point back into the source.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

from .tokens import SourceSpan


class MapObjectKind(enum.Enum):
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


# Kinds with real geometry in the simulator; the rest are parse-accepted
# and matched against opaque map metadata only.
GEOMETRIC_KINDS = (MapObjectKind.JUNCTION, MapObjectKind.ROAD, MapObjectKind.LANE)

JUNCTION_TYPES = ("+", "T", "X", "Y", "unknown")


class ActorKind(enum.Enum):
    AUT_CAR = "Aut_Car"
    CAR = "Car"
    PEDESTRIAN = "Pedestrian"


# ---------------------------------------------------------------------------
# value expressions


@dataclass(frozen=True)
class Fixed:
    value: float


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float


@dataclass(frozen=True)
class Text:
    value: str


ParamValue = Union[Fixed, Interval, Text]


@dataclass
class ParamBinding:
    name: str
    value: ParamValue
    span: SourceSpan


# ---------------------------------------------------------------------------
# conditions (guards, periodic oracles)


@dataclass
class DistanceCall:
    """distance(a, b) in meters, center to center."""

    left: str
    right: str
    span: SourceSpan


@dataclass
class AttrRead:
    """actor.attribute, e.g. car.speed."""

    actor: str
    attr: str
    span: SourceSpan


@dataclass
class CollidedCall:
    """actor.isCollided()"""

    actor: str
    span: SourceSpan


@dataclass
class NumberLit:
    value: float
    span: SourceSpan


@dataclass
class IntervalLit:
    """An interval threshold; becomes a parameter slot during extraction."""

    lo: float
    hi: float
    span: SourceSpan


@dataclass
class Compare:
    op: str  # '<', '>', '=='
    left: "CondExpr"
    right: "CondExpr"
    span: SourceSpan


@dataclass
class BoolOp:
    op: str  # '||' or '&&'
    left: "CondExpr"
    right: "CondExpr"
    span: SourceSpan


CondExpr = Union[DistanceCall, AttrRead, CollidedCall, NumberLit, IntervalLit, Compare, BoolOp]


# ---------------------------------------------------------------------------
# blocks


@dataclass
class ConstraintExpr:
    """``path == literal`` constraint; bare-string shorthand becomes kind == value."""

    path: list[object]  # attribute names (str) interleaved with 1-based indexes (int)
    value: object  # float | str | tuple (coordinate) | Interval
    span: SourceSpan
    is_shorthand: bool = False  # came from a bare "..." literal


@dataclass
class MapDecl:
    object_kind: MapObjectKind
    name: str
    constraints: list[ConstraintExpr]
    span: SourceSpan


@dataclass
class AbsoluteLane:
    lane: str  # name of a map-block declaration


@dataclass
class CoordinatePos:
    x: float
    y: float


@dataclass
class RelativePos:
    anchor: str
    angle: float = 0.0  # degrees clockwise relative to anchor heading
    front_distance: float = 0.0  # meters along anchor heading


@dataclass
class DefaultPos:
    """No position constraint given; placement falls to the map default."""


PositionSpec = Union[AbsoluteLane, CoordinatePos, RelativePos, DefaultPos]


@dataclass
class ActorDecl:
    actor_kind: ActorKind
    name: str
    attributes: dict[str, object]
    position: PositionSpec
    span: SourceSpan


@dataclass
class ActionLeaf:
    actor: str
    action: str
    params: list[ParamBinding]
    pre: Optional[CondExpr]
    post: Optional[CondExpr]
    span: SourceSpan


@dataclass
class Serial:
    children: list["BtAstNode"]
    span: SourceSpan


@dataclass
class Parallel:
    children: list["BtAstNode"]
    span: SourceSpan


BtAstNode = Union[Serial, Parallel, ActionLeaf]


class OracleKind(enum.Enum):
    PERIODIC = "periodic"
    RECORD = "record"


@dataclass
class OracleDecl:
    kind: OracleKind
    expr: Optional[CondExpr]  # periodic
    channel: Optional[tuple[str, str]]  # record: (actor, attribute)
    span: SourceSpan


@dataclass
class ScenarioAst:
    name: str
    map_block: list[MapDecl]
    init_block: list[ActorDecl]
    execute_block: BtAstNode
    oracle_block: list[OracleDecl]
    span: SourceSpan = field(default_factory=lambda: SourceSpan(1, 1, 0))


def root_children(ast: ScenarioAst) -> list[BtAstNode]:
    """The scenario's steps: children of the root composite."""
    root = ast.execute_block
    if isinstance(root, (Serial, Parallel)):
        return root.children
    return [root]


def iter_leaves(node: BtAstNode):
    """Depth-first iteration over action leaves."""
    if isinstance(node, ActionLeaf):
        yield node
    else:
        for child in node.children:
            yield from iter_leaves(child)
