# graphlin/graph.py
"""In-memory sentences and dependency graphs, plus the structural
predicates every other module builds on (crossing, direction, cycles,
degrees)."""

from __future__ import annotations

import logging
from enum import Enum
from fractions import Fraction
from typing import Annotated, Dict, FrozenSet, Iterable, List, NamedTuple, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, field_validator, model_validator

logger = logging.getLogger(__name__)

# exact ratio, dumped as a float in JSON
Ratio = Annotated[Fraction, PlainSerializer(float, return_type=float, when_used="json")]


class ArcKind(str, Enum):
    REGULAR = "regular"
    DUMMY = "dummy"
    NULL = "null"


class ArcDirection(str, Enum):
    RIGHTWARD = "rightward"
    LEFTWARD = "leftward"


class Arc(NamedTuple):
    head: int
    dep: int
    relation: str = "_"
    kind: ArcKind = ArcKind.REGULAR

    @property
    def direction(self) -> ArcDirection:
        # root arcs (head 0) are always rightward
        return ArcDirection.RIGHTWARD if self.head < self.dep else ArcDirection.LEFTWARD

    @property
    def is_rightward(self) -> bool:
        return self.head < self.dep

    @property
    def left(self) -> int:
        return self.head if self.head < self.dep else self.dep

    @property
    def right(self) -> int:
        return self.dep if self.head < self.dep else self.head

    @property
    def is_root(self) -> bool:
        return self.head == 0

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.head, self.dep)


def check_arc(arc: Arc) -> None:
    """Raise ValueError when an arc breaks its own invariants."""
    if arc.head == arc.dep:
        raise ValueError(f"self-loop on position {arc.dep}")
    if arc.head < 0 or arc.dep < 1:
        raise ValueError(f"arc {arc.head}->{arc.dep} has an invalid endpoint")
    if arc.kind == ArcKind.DUMMY and arc.head != 0:
        raise ValueError(f"dummy arc must start at position 0, got {arc.head}->{arc.dep}")
    if arc.kind == ArcKind.NULL and arc.head != arc.dep - 1:
        raise ValueError(f"null arc must link the previous position, got {arc.head}->{arc.dep}")


class Token(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=1)
    form: str
    extra: Dict[str, str] = Field(default_factory=dict)


class DepGraph(BaseModel):
    """A sentence and its (possibly cyclic, reentrant) dependency graph.

    Arcs are kept sorted by (dep, head). Only regular arcs are accepted;
    dummy and null arcs belong to encoder-side plane assignments.
    """

    model_config = ConfigDict(frozen=True)

    tokens: Tuple[Token, ...]
    arcs: Tuple[Arc, ...] = ()
    sentence_id: str = ""
    comments: Tuple[str, ...] = ()

    @field_validator("arcs")
    @classmethod
    def _sort_arcs(cls, arcs: Tuple[Arc, ...]) -> Tuple[Arc, ...]:
        return tuple(sorted(arcs, key=lambda a: (a.dep, a.head)))

    @model_validator(mode="after")
    def _check(self) -> "DepGraph":
        n = len(self.tokens)
        for expected, token in enumerate(self.tokens, start=1):
            if token.index != expected:
                raise ValueError(f"token indices must be 1..{n} in order, found {token.index} at {expected}")
        seen = set()
        for arc in self.arcs:
            check_arc(arc)
            if arc.kind != ArcKind.REGULAR:
                raise ValueError(f"{arc.kind.value} arc {arc.head}->{arc.dep} cannot appear in a graph")
            if arc.head > n or arc.dep > n:
                raise ValueError(f"arc {arc.head}->{arc.dep} is outside 0..{n}")
            if arc.pair in seen:
                raise ValueError(f"duplicate arc {arc.head}->{arc.dep}")
            seen.add(arc.pair)
        return self

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Arc], sentence_id: str = "", forms: Iterable[str] = ()) -> "DepGraph":
        forms = list(forms)
        tokens = tuple(
            Token(index=i, form=forms[i - 1] if i <= len(forms) else f"w{i}") for i in range(1, n + 1)
        )
        return cls(tokens=tokens, arcs=tuple(arcs), sentence_id=sentence_id)

    @classmethod
    def trusted(
        cls, tokens: Iterable[Token], arcs: Iterable[Arc], sentence_id: str = "", comments: Iterable[str] = ()
    ) -> "DepGraph":
        """Build without validation. Only for arcs that are already checked
        (decoder output); the arc order still matches the validated path."""
        return cls.model_construct(
            tokens=tuple(tokens),
            arcs=tuple(sorted(arcs, key=lambda a: (a[1], a[0]))),
            sentence_id=sentence_id,
            comments=tuple(comments),
        )

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def root_arcs(self) -> Tuple[Arc, ...]:
        return tuple(a for a in self.arcs if a.head == 0)

    @property
    def structural_arcs(self) -> Tuple[Arc, ...]:
        """Arcs between two tokens (root arcs excluded)."""
        return tuple(a for a in self.arcs if a.head != 0)

    def heads_of(self, dep: int) -> List[int]:
        return [a.head for a in self.arcs if a.dep == dep]

    def pairs(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset(a.pair for a in self.arcs)

    def labeled(self) -> FrozenSet[Tuple[int, int, str]]:
        return frozenset((a.head, a.dep, a.relation) for a in self.arcs)

    def with_arcs(self, arcs: Iterable[Arc]) -> "DepGraph":
        return DepGraph(tokens=self.tokens, arcs=tuple(arcs), sentence_id=self.sentence_id, comments=self.comments)


def span(arc: Arc) -> Tuple[int, int]:
    """(left, right) endpoints of an arc."""
    head, dep = arc[0], arc[1]
    return (head, dep) if head < dep else (dep, head)


def spans_cross(l1: int, r1: int, l2: int, r2: int) -> bool:
    # equal left endpoints never interleave
    return l1 < l2 < r1 < r2 or l2 < l1 < r2 < r1


def crosses(a: Arc, b: Arc) -> bool:
    """Spans strictly interleave; arcs sharing their left endpoint never cross."""
    return spans_cross(*span(a), *span(b))


def same_direction_cross(a: Arc, b: Arc) -> bool:
    return (a[0] < a[1]) == (b[0] < b[1]) and crosses(a, b)


def _digraph(g: DepGraph) -> nx.DiGraph:
    dg = nx.DiGraph()
    dg.add_nodes_from(range(1, g.n + 1))
    dg.add_edges_from(a.pair for a in g.structural_arcs)
    return dg


def cycle_count(g: DepGraph) -> int:
    """Number of non-trivial strongly connected components over tokens."""
    if not g.structural_arcs:
        return 0
    dg = _digraph(g)
    count = 0
    for component in nx.strongly_connected_components(dg):
        if len(component) > 1:
            count += 1
        elif dg.has_edge(next(iter(component)), next(iter(component))):
            count += 1
    return count


def has_cycle(g: DepGraph) -> bool:
    if not g.structural_arcs:
        return False
    return not nx.is_directed_acyclic_graph(_digraph(g))


class DegreeStats(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    max_in_degree: int
    max_out_degree: int
    in_degree_total: int
    out_degree_total: int
    arcs_per_token: Ratio
    isolated_count: int


def degree_stats(g: DepGraph, include_root: bool = False) -> DegreeStats:
    """In-degrees count root arcs only when `include_root` is set; out-degrees never do."""
    in_deg = [0] * (g.n + 1)
    out_deg = [0] * (g.n + 1)
    touched = set()
    counted = 0
    for arc in g.arcs:
        if arc.is_root and not include_root:
            continue
        counted += 1
        in_deg[arc.dep] += 1
        touched.add(arc.dep)
        if not arc.is_root:
            out_deg[arc.head] += 1
            touched.add(arc.head)
    tokens = range(1, g.n + 1)
    return DegreeStats(
        n=g.n,
        max_in_degree=max((in_deg[i] for i in tokens), default=0),
        max_out_degree=max((out_deg[i] for i in tokens), default=0),
        in_degree_total=sum(in_deg),
        out_degree_total=sum(out_deg),
        arcs_per_token=Fraction(counted, g.n) if g.n else Fraction(0),
        isolated_count=sum(1 for i in tokens if i not in touched),
    )
