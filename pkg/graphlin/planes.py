# graphlin/planes.py
"""Plane assignment: partition a sentence's arcs into indexed planes under an
incompatibility rule, plus the augmentations the bit encodings need (null
arcs, direction pairs, root attachment)."""

from __future__ import annotations

import logging
from enum import Enum
from operator import itemgetter
from typing import Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from .config import NULL_RELATION
from .graph import Arc, ArcKind, same_direction_cross, span

logger = logging.getLogger(__name__)

Plane = Tuple[Arc, ...]


class IncompatibilityRule(str, Enum):
    SAME_DIRECTION_CROSS = "same_direction_cross"
    SAME_DIRECTION_CROSS_OR_SHARED_DEPENDENT = "same_direction_cross_or_shared_dependent"

    def conflicts(self, a: Arc, b: Arc) -> bool:
        if self is IncompatibilityRule.SAME_DIRECTION_CROSS_OR_SHARED_DEPENDENT and a.dep == b.dep:
            return True
        return same_direction_cross(a, b)


def _order_key(arc: Arc) -> Tuple[int, int, int, int]:
    head, dep = arc[0], arc[1]
    if head < dep:
        return (head, dep, 0, head)
    return (dep, head, 1, head)


def canonical_order(arcs: Iterable[Arc]) -> List[Arc]:
    """Traversal order shared by every assignment: min endpoint, max endpoint,
    rightward before leftward, then head."""
    return sorted(arcs, key=_order_key)


class _OpenPlane:
    """A plane under construction, with arc spans kept per direction for
    quick compatibility checks."""

    __slots__ = ("arcs", "spans", "deps")

    def __init__(self, arcs: Iterable[Arc] = ()):
        self.arcs: List[Arc] = []
        self.spans: Tuple[List[Tuple[int, int]], List[Tuple[int, int]]] = ([], [])
        self.deps = set()
        for arc in arcs:
            left, right = span(arc)
            self.add(arc, left, right, arc[0] < arc[1])

    def accepts(self, left: int, right: int, rightward: bool, dep: int, shared_dependent: bool) -> bool:
        if shared_dependent and dep in self.deps:
            return False
        for l2, r2 in self.spans[0 if rightward else 1]:
            if left < l2 < right < r2 or l2 < left < r2 < right:
                return False
        return True

    def add(self, arc: Arc, left: int, right: int, rightward: bool) -> None:
        self.arcs.append(arc)
        self.spans[0 if rightward else 1].append((left, right))
        self.deps.add(arc[1])


def _audit_plane(plane: Sequence[Arc], rule: IncompatibilityRule) -> List[Tuple[Arc, Arc]]:
    bad = []
    for x in range(len(plane)):
        for y in range(x + 1, len(plane)):
            if rule.conflicts(plane[x], plane[y]):
                bad.append((plane[x], plane[y]))
    return bad


class PlaneAssignment(BaseModel):
    """Arcs split into planes 1..k (index 0 here is plane 1) plus the arcs
    that did not fit."""

    model_config = ConfigDict(frozen=True)

    planes: Tuple[Plane, ...] = ()
    overflow: Tuple[Arc, ...] = ()
    rule: IncompatibilityRule = IncompatibilityRule.SAME_DIRECTION_CROSS

    @property
    def k(self) -> int:
        return len(self.planes)

    @property
    def used(self) -> int:
        """Number of non-empty planes."""
        return sum(1 for p in self.planes if p)

    @property
    def regular_overflow(self) -> Tuple[Arc, ...]:
        return tuple(a for a in self.overflow if a.kind == ArcKind.REGULAR)

    def arcs(self) -> List[Arc]:
        return [a for plane in self.planes for a in plane]

    def audit(self, rule: Optional[IncompatibilityRule] = None) -> List[Tuple[int, Arc, Arc]]:
        """Pairs of arcs sharing a plane that break `rule` (the assignment's own by default)."""
        rule = rule or self.rule
        return [(j, a, b) for j, plane in enumerate(self.planes, start=1) for a, b in _audit_plane(plane, rule)]

    def padded(self, k: int) -> "PlaneAssignment":
        if self.k >= k:
            return self
        return self.model_copy(update={"planes": self.planes + ((),) * (k - self.k)})


def greedy_assign(
    arcs: Iterable[Arc],
    k_max: Optional[int] = None,
    rule: IncompatibilityRule = IncompatibilityRule.SAME_DIRECTION_CROSS,
) -> PlaneAssignment:
    """Place each arc, in canonical order, into the lowest plane where it is
    compatible with everything already there. With `k_max` set, arcs that fit
    nowhere go to overflow; planes 1..k_max then match the unbounded run."""
    shared = rule is IncompatibilityRule.SAME_DIRECTION_CROSS_OR_SHARED_DEPENDENT
    planes: List[_OpenPlane] = []
    overflow: List[Arc] = []
    for (left, right, backward, _), arc in sorted(((_order_key(a), a) for a in arcs), key=itemgetter(0)):
        rightward = not backward
        for plane in planes:
            if plane.accepts(left, right, rightward, arc[1], shared):
                plane.add(arc, left, right, rightward)
                break
        else:
            if k_max is None or len(planes) < k_max:
                plane = _OpenPlane()
                plane.add(arc, left, right, rightward)
                planes.append(plane)
            else:
                overflow.append(arc)
    if overflow:
        logger.debug(f"{len(overflow)} arc(s) do not fit in {k_max} plane(s) under {rule.value}")
    return PlaneAssignment.model_construct(
        planes=tuple(tuple(p.arcs) for p in planes), overflow=tuple(overflow), rule=rule
    )


def split_in_degree(
    arcs: Iterable[Arc],
    k_max: Optional[int] = None,
    rule: IncompatibilityRule = IncompatibilityRule.SAME_DIRECTION_CROSS_OR_SHARED_DEPENDENT,
) -> PlaneAssignment:
    """Greedy split where every plane also keeps in-degree at most one.

    Dummy arcs from position 0 are expected among `arcs` and compete for
    planes like any other rightward arc.
    """
    return greedy_assign(arcs, k_max, rule)


def null_arc(dep: int) -> Arc:
    return Arc(dep - 1, dep, NULL_RELATION, ArcKind.NULL)


def add_null_arcs(assignment: PlaneAssignment, n: int, k: Optional[int] = None) -> PlaneAssignment:
    """Give every parentless position of every plane a null arc from the
    previous position (0 for the first token). Pads to `k` planes first."""
    if k is not None:
        assignment = assignment.padded(k)
    planes = []
    for plane in assignment.planes:
        has_parent = {a.dep for a in plane}
        extra = [null_arc(i) for i in range(1, n + 1) if i not in has_parent]
        planes.append(tuple(canonical_order(list(plane) + extra)))
    return assignment.model_copy(update={"planes": tuple(planes)})


class DirectionPairs(BaseModel):
    """Rightward plane j and leftward plane j form pair j."""

    model_config = ConfigDict(frozen=True)

    rightward: Tuple[Plane, ...] = ()
    leftward: Tuple[Plane, ...] = ()
    overflow: Tuple[Arc, ...] = ()

    @property
    def k(self) -> int:
        return max(len(self.rightward), len(self.leftward))

    @property
    def regular_overflow(self) -> Tuple[Arc, ...]:
        return tuple(a for a in self.overflow if a.kind == ArcKind.REGULAR and not a.is_root)

    def pair(self, j: int) -> Tuple[Plane, Plane]:
        """Pair j, 1-based; missing planes are empty."""
        right = self.rightward[j - 1] if j <= len(self.rightward) else ()
        left = self.leftward[j - 1] if j <= len(self.leftward) else ()
        return right, left

    def padded(self, k: int) -> "DirectionPairs":
        return self.model_copy(
            update={
                "rightward": self.rightward + ((),) * max(0, k - len(self.rightward)),
                "leftward": self.leftward + ((),) * max(0, k - len(self.leftward)),
            }
        )

    def audit(self) -> List[Tuple[int, Arc, Arc]]:
        rule = IncompatibilityRule.SAME_DIRECTION_CROSS_OR_SHARED_DEPENDENT
        bad = []
        for j in range(1, self.k + 1):
            right, left = self.pair(j)
            if any(not a.is_rightward for a in right) or any(a.is_rightward for a in left):
                raise ValueError(f"pair {j} mixes arc directions")
            bad.extend((j, a, b) for a, b in _audit_plane(right, rule) + _audit_plane(left, rule))
        return bad


def assign_direction_pairs(arcs: Iterable[Arc], k_max: Optional[int] = None) -> DirectionPairs:
    """Assign rightward and leftward arcs separately, both with in-degree one
    per plane. Root arcs are ignored here; see `attach_root_arcs`."""
    rule = IncompatibilityRule.SAME_DIRECTION_CROSS_OR_SHARED_DEPENDENT
    arcs = [a for a in arcs if not a.is_root]
    right = greedy_assign([a for a in arcs if a.is_rightward], k_max, rule)
    left = greedy_assign([a for a in arcs if not a.is_rightward], k_max, rule)
    pairs = DirectionPairs.model_construct(
        rightward=right.planes,
        leftward=left.planes,
        overflow=tuple(canonical_order(right.overflow + left.overflow)),
    )
    return pairs.padded(k_max) if k_max is not None else pairs


def attach_root_arcs(pairs: DirectionPairs, root_arcs: Iterable[Arc]) -> DirectionPairs:
    """Put root arcs into the lowest rightward plane that accepts them.

    A root arc that fits nowhere stays out; the encoders carry root arcs in
    their own channel, so nothing is lost.
    """
    root_arcs = canonical_order(root_arcs)
    if not root_arcs:
        return pairs
    rightward = [_OpenPlane(p) for p in pairs.rightward]
    for arc in root_arcs:
        for plane in rightward:
            if plane.accepts(0, arc[1], True, arc[1], True):
                plane.add(arc, 0, arc[1], True)
                break
    return pairs.model_copy(update={"rightward": tuple(tuple(canonical_order(p.arcs)) for p in rightward)})


def pairs_from_planes(assignment: PlaneAssignment) -> DirectionPairs:
    """Split every plane of an in-degree-one assignment by direction.

    Dummy and null arcs are dropped; only regular overflow carries over.
    """
    rightward = []
    leftward = []
    for plane in assignment.planes:
        regular = [a for a in plane if a.kind == ArcKind.REGULAR and not a.is_root]
        rightward.append(tuple(a for a in regular if a.is_rightward))
        leftward.append(tuple(a for a in regular if not a.is_rightward))
    return DirectionPairs.model_construct(
        rightward=tuple(rightward), leftward=tuple(leftward), overflow=assignment.regular_overflow
    )


def planes_from_pairs(pairs: DirectionPairs) -> PlaneAssignment:
    """Join pair j back into plane j (opposite directions never conflict)."""
    planes = []
    for j in range(1, pairs.k + 1):
        right, left = pairs.pair(j)
        planes.append(tuple(canonical_order(a for a in right + left if not a.is_root)))
    return PlaneAssignment.model_construct(
        planes=tuple(planes),
        overflow=pairs.regular_overflow,
        rule=IncompatibilityRule.SAME_DIRECTION_CROSS,
    )
