# graphlin/encodings.py
"""Graph <-> label-sequence encodings.

Five families share one decoding back end:

    abs / rel   positional: x_i lists the heads (or head offsets) of token i
    b           bracket: arc endpoints as < > / \\ symbols, one marker set per plane
    b4          4k bits: k in-degree-one planes with dummy and null arcs
    b6          6k bits: k pairs of one rightward and one leftward plane

Structural decoders emit candidate arcs; the relation channel d_i is then
aligned with the candidates of each dependent, artificial arcs (relation
NULL) are stripped and root arcs come back from the roots channel.
"""

from __future__ import annotations

import logging
import re
from abc import ABC, abstractmethod
from collections import Counter, defaultdict
from enum import Enum
from functools import lru_cache
from typing import ClassVar, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import DEFAULT_BITS_K, DEFAULT_BRACKET_K, EMPTY_FIELD, NULL_RELATION
from .errors import IllFormedError, LabelError, LabelGrammarError, SpecError
from .graph import Arc, ArcKind, DepGraph, Token
from .planes import (
    DirectionPairs,
    PlaneAssignment,
    add_null_arcs,
    assign_direction_pairs,
    attach_root_arcs,
    greedy_assign,
    pairs_from_planes,
    planes_from_pairs,
    split_in_degree,
)

logger = logging.getLogger(__name__)


class EncodingFamily(str, Enum):
    ABSOLUTE = "abs"
    RELATIVE = "rel"
    BRACKET = "b"
    BITS4 = "b4"
    BITS6 = "b6"

    @property
    def positional(self) -> bool:
        return self in (EncodingFamily.ABSOLUTE, EncodingFamily.RELATIVE)


_FAMILY_ALIASES: Dict[str, EncodingFamily] = {
    "abs": EncodingFamily.ABSOLUTE,
    "absolute": EncodingFamily.ABSOLUTE,
    "a": EncodingFamily.ABSOLUTE,
    "rel": EncodingFamily.RELATIVE,
    "relative": EncodingFamily.RELATIVE,
    "r": EncodingFamily.RELATIVE,
    "b": EncodingFamily.BRACKET,
    "bracket": EncodingFamily.BRACKET,
    "b4": EncodingFamily.BITS4,
    "bits4": EncodingFamily.BITS4,
    "4k": EncodingFamily.BITS4,
    "b6": EncodingFamily.BITS6,
    "bits6": EncodingFamily.BITS6,
    "6k": EncodingFamily.BITS6,
}


class EncodingSpec(BaseModel):
    """An encoding family plus its plane parameter k (always 1 for positional)."""

    model_config = ConfigDict(frozen=True)

    family: EncodingFamily
    k: int = Field(1, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _positional_k(cls, data):
        # k means nothing to the positional families
        if isinstance(data, dict) and data.get("family") in ("abs", "rel"):
            data = {**data, "k": 1}
        return data

    @classmethod
    def parse(cls, text: Union[str, "EncodingSpec"]) -> "EncodingSpec":
        """Parse ``family[:k]``, e.g. ``abs``, ``b:2``, ``b4:3``, ``b6``."""
        if isinstance(text, EncodingSpec):
            return text
        raw = text.strip().lower()
        name, _, k_text = raw.partition(":")
        family = _FAMILY_ALIASES.get(name)
        if family is None:
            raise SpecError(f"unknown encoding family {name!r} in {text!r}")
        if family.positional:
            return cls(family=family)
        if not k_text:
            k = DEFAULT_BRACKET_K if family == EncodingFamily.BRACKET else DEFAULT_BITS_K
        else:
            try:
                k = int(k_text)
            except ValueError:
                raise SpecError(f"k must be an integer in {text!r}") from None
        if k < 1:
            raise SpecError(f"k must be at least 1 in {text!r}")
        return cls(family=family, k=k)

    @property
    def label_bound(self) -> Optional[int]:
        """Size of the structural label space, for the fixed-width families."""
        if self.family == EncodingFamily.BITS4:
            return 2 ** (4 * self.k)
        if self.family == EncodingFamily.BITS6:
            return 2 ** (6 * self.k)
        return None

    def __str__(self) -> str:
        if self.family.positional:
            return self.family.value
        return f"{self.family.value}:{self.k}"


def parse_specs(text: str) -> List[EncodingSpec]:
    """Comma-separated list of specs."""
    specs = [EncodingSpec.parse(part) for part in text.split(",") if part.strip()]
    if not specs:
        raise SpecError("no encoding spec given")
    return specs


class CoverageReport(BaseModel):
    dropped_arcs: int = 0
    total_arcs: int = 0

    @property
    def lossless(self) -> bool:
        return self.dropped_arcs == 0

    def merge(self, other: "CoverageReport") -> "CoverageReport":
        return CoverageReport(
            dropped_arcs=self.dropped_arcs + other.dropped_arcs,
            total_arcs=self.total_arcs + other.total_arcs,
        )


class LabelSeq(BaseModel):
    """One structural label, one relation tuple and one optional root
    relation per token."""

    model_config = ConfigDict(frozen=True)

    structural: Tuple[str, ...]
    relations: Tuple[Tuple[str, ...], ...]
    roots: Tuple[Optional[str], ...]
    coverage: CoverageReport = Field(default_factory=CoverageReport)

    @model_validator(mode="after")
    def _lengths(self) -> "LabelSeq":
        n = len(self.structural)
        if len(self.relations) != n or len(self.roots) != n:
            raise LabelError(
                f"label channels disagree in length: structural={n}, "
                f"relations={len(self.relations)}, roots={len(self.roots)}"
            )
        return self

    @property
    def n(self) -> int:
        return len(self.structural)


class RepairKind(str, Enum):
    OUT_OF_RANGE = "out_of_range"
    SELF_LOOP = "self_loop"
    DUPLICATE = "duplicate"
    EMPTY_STACK = "empty_stack"
    UNMATCHED = "unmatched"
    ORPHAN_FLAG = "orphan_flag"
    RELATION_MISMATCH = "relation_mismatch"


class Repair(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: RepairKind
    token: int
    group: int = 0
    detail: str = ""

    def __str__(self) -> str:
        where = f"token {self.token}" + (f", group {self.group}" if self.group else "")
        return f"{self.kind.value} at {where}" + (f": {self.detail}" if self.detail else "")


class RepairReport(BaseModel):
    well_formed: bool
    repairs: List[Repair] = Field(default_factory=list)


class Candidate(NamedTuple):
    """A decoded arc waiting for its relation; `key` orders the arcs of one
    dependent the same way encode ordered d_i."""

    head: int
    dep: int
    key: Tuple[int, int]
    valid: bool = True


def _relations_for(arcs_by_dep: Dict[int, List[Tuple[Tuple[int, int], str]]], n: int) -> Tuple[Tuple[str, ...], ...]:
    return tuple(tuple(rel for _, rel in sorted(arcs_by_dep.get(i, ()))) for i in range(1, n + 1))


@lru_cache(maxsize=256)
def placeholder_tokens(n: int) -> Tuple[Token, ...]:
    """Forms w1..wn for label sequences decoded without their sentence."""
    return tuple(Token(index=i, form=f"w{i}") for i in range(1, n + 1))


def _roots_channel(g: DepGraph) -> Tuple[Optional[str], ...]:
    roots: List[Optional[str]] = [None] * g.n
    for arc in g.root_arcs:
        roots[arc.dep - 1] = arc.relation
    return tuple(roots)


class Encoding(ABC):
    family: ClassVar[EncodingFamily]
    # head-0 structural arcs are real root arcs (positional) or placeholders
    structural_roots: ClassVar[bool] = False

    def __init__(self, spec: EncodingSpec):
        if spec.family != self.family:
            raise SpecError(f"{type(self).__name__} cannot run spec {spec}")
        self.spec = spec
        self.k = spec.k

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec})"

    @abstractmethod
    def encode(self, g: DepGraph) -> LabelSeq:
        ...

    @abstractmethod
    def parse_label(self, text: str):
        """Parse one structural label or raise LabelGrammarError."""

    @abstractmethod
    def _candidates(self, parsed: Sequence, n: int, repairs: List[Repair]) -> List[Candidate]:
        ...

    def decode(
        self,
        labels: LabelSeq,
        strict: bool = False,
        tokens: Optional[Sequence[Token]] = None,
        sentence_id: str = "",
    ) -> DepGraph:
        g, repairs = self.audit(labels, tokens=tokens, sentence_id=sentence_id)
        if repairs:
            if strict:
                raise IllFormedError(repairs)
            logger.debug(f"{sentence_id or 'sentence'}: {len(repairs)} repair(s) under {self.spec}, first: {repairs[0]}")
        return g

    def audit(
        self,
        labels: LabelSeq,
        tokens: Optional[Sequence[Token]] = None,
        sentence_id: str = "",
    ) -> Tuple[DepGraph, List[Repair]]:
        """Decode without raising on ill-formedness; returns the graph and every repair applied."""
        n = labels.n
        if tokens is not None and len(tokens) != n:
            raise LabelError(f"{n} label(s) for {len(tokens)} token(s)")
        parsed = [self.parse_label(text) for text in labels.structural]
        repairs: List[Repair] = []
        candidates = self._candidates(parsed, n, repairs)
        arcs = self._assemble(labels, candidates, repairs)
        if tokens is None:
            tokens = placeholder_tokens(n)
        return DepGraph.trusted(tokens, arcs, sentence_id=sentence_id), repairs

    def _assemble(self, labels: LabelSeq, candidates: List[Candidate], repairs: List[Repair]) -> List[Arc]:
        by_dep: Dict[int, List[Candidate]] = defaultdict(list)
        for cand in candidates:
            by_dep[cand.dep].append(cand)

        arcs: List[Arc] = []
        seen = set()
        for i in range(1, labels.n + 1):
            cands = sorted(by_dep.get(i, ()), key=lambda c: c.key)
            rels = list(labels.relations[i - 1])
            if len(rels) != len(cands):
                repairs.append(
                    Repair(
                        kind=RepairKind.RELATION_MISMATCH,
                        token=i,
                        detail=f"{len(rels)} relation(s) for {len(cands)} arc(s)",
                    )
                )
                rels = (rels + [EMPTY_FIELD] * len(cands))[: len(cands)]
            for cand, rel in zip(cands, rels):
                if not cand.valid or rel == NULL_RELATION:
                    continue
                if cand.head == 0 and not self.structural_roots:
                    repairs.append(
                        Repair(kind=RepairKind.RELATION_MISMATCH, token=i, detail=f"root placeholder carries {rel!r}")
                    )
                    continue
                if (cand.head, i) in seen:
                    repairs.append(Repair(kind=RepairKind.DUPLICATE, token=i, detail=f"head {cand.head}"))
                    continue
                seen.add((cand.head, i))
                arcs.append(Arc(cand.head, i, rel))

        if not self.structural_roots:
            for i, rel in enumerate(labels.roots, start=1):
                if rel is not None and (0, i) not in seen:
                    seen.add((0, i))
                    arcs.append(Arc(0, i, rel))
        return arcs


class PositionalEncoding(Encoding):
    """x_i is the tuple of heads of token i (absolute) or of head offsets h - i
    (relative), root arcs included; d_i follows the same order."""

    structural_roots = True
    _pattern = re.compile(r"^\((-?\d+(?:,-?\d+)*)?\)$")

    @property
    def relative(self) -> bool:
        return self.family == EncodingFamily.RELATIVE

    def encode(self, g: DepGraph) -> LabelSeq:
        heads: Dict[int, List[Arc]] = defaultdict(list)
        for arc in g.arcs:
            heads[arc.dep].append(arc)
        structural = []
        relations = []
        for i in range(1, g.n + 1):
            incoming = sorted(heads.get(i, ()), key=lambda a: a.head)
            values = [a.head - i if self.relative else a.head for a in incoming]
            structural.append("(" + ",".join(str(v) for v in values) + ")")
            relations.append(tuple(a.relation for a in incoming))
        return LabelSeq(
            structural=tuple(structural),
            relations=tuple(relations),
            roots=_roots_channel(g),
            coverage=CoverageReport(total_arcs=len(g.arcs)),
        )

    def parse_label(self, text: str) -> Tuple[int, ...]:
        m = self._pattern.match(text)
        if m is None:
            raise LabelGrammarError(f"not a positional label: {text!r}")
        inner = m.group(1)
        return tuple(int(v) for v in inner.split(",")) if inner else ()

    def _candidates(self, parsed, n, repairs):
        out = []
        for i, values in enumerate(parsed, start=1):
            for pos, value in enumerate(values):
                head = i + value if self.relative else value
                valid = True
                if head == i:
                    repairs.append(Repair(kind=RepairKind.SELF_LOOP, token=i))
                    valid = False
                elif not 0 <= head <= n:
                    repairs.append(Repair(kind=RepairKind.OUT_OF_RANGE, token=i, detail=f"head {head} outside 0..{n}"))
                    valid = False
                out.append(Candidate(head, i, (pos, 0), valid))
        return out


class AbsolutePositional(PositionalEncoding):
    family = EncodingFamily.ABSOLUTE


class RelativePositional(PositionalEncoding):
    family = EncodingFamily.RELATIVE


class PlanarEncoding(Encoding):
    """Families that first split the arcs into planes (or plane pairs)."""

    @abstractmethod
    def assign(self, g: DepGraph):
        ...

    @abstractmethod
    def encode_with(self, g: DepGraph, assignment) -> LabelSeq:
        """Encode under an explicit assignment instead of the default one."""

    def encode(self, g: DepGraph) -> LabelSeq:
        return self.encode_with(g, self.assign(g))

    def _finish(self, g: DepGraph, structural, kept: Dict[int, List], dropped: int) -> LabelSeq:
        if dropped:
            logger.debug(f"{g.sentence_id or 'sentence'}: {dropped} arc(s) dropped by {self.spec}")
        return LabelSeq(
            structural=tuple(structural),
            relations=_relations_for(kept, g.n),
            roots=_roots_channel(g),
            coverage=CoverageReport(dropped_arcs=dropped, total_arcs=len(g.arcs)),
        )


class BracketEncoding(PlanarEncoding):
    """Each arc adds one symbol to both endpoints: a rightward arc puts "/" on
    its head and ">" on its dependent, a leftward arc "<" on its dependent and
    "\\" on its head. Plane j symbols carry j-1 asterisks."""

    family = EncodingFamily.BRACKET
    _symbol = re.compile(r"([<>/\\])(\**)")
    _order = (">", "\\", "<", "/")

    def assign(self, g: DepGraph) -> PlaneAssignment:
        planes = greedy_assign(g.structural_arcs, self.k)
        if planes.overflow:
            fallback = planes_from_pairs(get_encoding(EncodingSpec(family=EncodingFamily.BITS6, k=self.k)).assign(g))
            if len(fallback.overflow) < len(planes.overflow):
                logger.debug(f"{g.sentence_id or 'sentence'}: bracket planes taken from the 6k pair split")
                return fallback
        return planes

    def encode_with(self, g: DepGraph, assignment: PlaneAssignment) -> LabelSeq:
        counts: List[Dict[int, Counter]] = [defaultdict(Counter) for _ in range(g.n + 1)]
        kept: Dict[int, List] = defaultdict(list)
        for j, plane in enumerate(assignment.planes, start=1):
            for arc in plane:
                if arc.is_root:
                    continue
                if arc.is_rightward:
                    counts[arc.head][j]["/"] += 1
                    counts[arc.dep][j][">"] += 1
                else:
                    counts[arc.dep][j]["<"] += 1
                    counts[arc.head][j]["\\"] += 1
                kept[arc.dep].append(((arc.head, j), arc.relation))
        structural = [self.render(counts[i]) for i in range(1, g.n + 1)]
        return self._finish(g, structural, kept, len(assignment.regular_overflow))

    def render(self, by_plane: Dict[int, Counter]) -> str:
        parts = []
        for j in sorted(by_plane):
            stars = "*" * (j - 1)
            for sym in self._order:
                parts.append((sym + stars) * by_plane[j][sym])
        return "".join(parts)

    def parse_label(self, text: str) -> Dict[int, Counter]:
        by_plane: Dict[int, Counter] = defaultdict(Counter)
        pos = 0
        while pos < len(text):
            m = self._symbol.match(text, pos)
            if m is None:
                raise LabelGrammarError(f"unknown bracket symbol {text[pos]!r} in {text!r}")
            j = len(m.group(2)) + 1
            if j > self.k:
                raise LabelGrammarError(f"plane {j} in {text!r} exceeds k={self.k}")
            by_plane[j][m.group(1)] += 1
            pos = m.end()
        return by_plane

    def _candidates(self, parsed, n, repairs):
        out = []
        for j in range(1, self.k + 1):
            right: List[int] = []
            left: List[int] = []
            for i, by_plane in enumerate(parsed, start=1):
                symbols = by_plane.get(j)
                if not symbols:
                    continue
                for _ in range(symbols[">"]):
                    if right:
                        p = right.pop()
                        out.append(Candidate(p, i, (p, j)))
                    else:
                        repairs.append(Repair(kind=RepairKind.EMPTY_STACK, token=i, group=j, detail="'>' without '/'"))
                for _ in range(symbols["\\"]):
                    if left:
                        out.append(Candidate(i, left.pop(), (i, j)))
                    else:
                        repairs.append(Repair(kind=RepairKind.EMPTY_STACK, token=i, group=j, detail="'\\' without '<'"))
                left.extend([i] * symbols["<"])
                right.extend([i] * symbols["/"])
            for p in right + left:
                repairs.append(Repair(kind=RepairKind.UNMATCHED, token=p, group=j))
        return out


def _farthest(plane: Sequence[Arc]) -> Dict[int, Tuple[int, int]]:
    """For each head, its farthest dependent to the right and to the left (0 if none)."""
    far: Dict[int, List[int]] = defaultdict(lambda: [0, 0])
    for arc in plane:
        slot = far[arc.head]
        if arc.is_rightward:
            slot[0] = max(slot[0], arc.dep)
        elif slot[1] == 0 or arc.dep < slot[1]:
            slot[1] = arc.dep
    return {h: (r, l) for h, (r, l) in far.items()}


class BitEncoding(PlanarEncoding):
    width: ClassVar[int]

    def parse_label(self, text: str) -> str:
        if len(text) != self.width * self.k or text.strip("01"):
            raise LabelGrammarError(f"expected {self.width * self.k} bits, got {text!r}")
        return text

    def columns(self, parsed: Sequence[str], j: int) -> List[List[bool]]:
        """Bit b of group j for every token, as a list indexed 1..n."""
        base = self.width * j
        return [[False] + [text[base + b] == "1" for text in parsed] for b in range(self.width)]

    @staticmethod
    def _rightward_pass(n, parent_bits, pop_bits, push_bits, group, repairs, out, orphan=True):
        """Scan 1..n with position 0 at the bottom of the stack."""
        stack = [0]
        for i in range(1, n + 1):
            if parent_bits[i]:
                if stack:
                    out.append(Candidate(stack[-1], i, (stack[-1], group)))
                    if pop_bits[i]:
                        stack.pop()
                else:
                    repairs.append(Repair(kind=RepairKind.EMPTY_STACK, token=i, group=group, detail="no open rightward head"))
            elif orphan and pop_bits[i]:
                repairs.append(Repair(kind=RepairKind.ORPHAN_FLAG, token=i, group=group))
            if push_bits[i]:
                stack.append(i)
        for p in stack:
            if p != 0:
                repairs.append(Repair(kind=RepairKind.UNMATCHED, token=p, group=group, detail="rightward head"))

    @staticmethod
    def _leftward_pass(n, parent_bits, pop_bits, push_bits, group, repairs, out, orphan=True):
        stack: List[int] = []
        for i in range(n, 0, -1):
            if parent_bits[i]:
                if stack:
                    out.append(Candidate(stack[-1], i, (stack[-1], group)))
                    if pop_bits[i]:
                        stack.pop()
                else:
                    repairs.append(Repair(kind=RepairKind.EMPTY_STACK, token=i, group=group, detail="no open leftward head"))
            elif orphan and pop_bits[i]:
                repairs.append(Repair(kind=RepairKind.ORPHAN_FLAG, token=i, group=group))
            if push_bits[i]:
                stack.append(i)
        for p in stack:
            repairs.append(Repair(kind=RepairKind.UNMATCHED, token=p, group=group, detail="leftward head"))


class Bits4Encoding(BitEncoding):
    """Per plane j, token i gets four bits: parent is to the left; i is its
    parent's farthest dependent on that side; i has left dependents; i has
    right dependents. Every token has exactly one parent per plane thanks to
    dummy arcs (from 0, for tokens without heads) and null arcs."""

    family = EncodingFamily.BITS4
    width = 4

    @staticmethod
    def dummy_arcs(g: DepGraph) -> List[Arc]:
        has_head = {a.dep for a in g.structural_arcs}
        return [Arc(0, i, NULL_RELATION, ArcKind.DUMMY) for i in range(1, g.n + 1) if i not in has_head]

    def assign(self, g: DepGraph) -> PlaneAssignment:
        return split_in_degree(list(g.structural_arcs) + self.dummy_arcs(g), self.k)

    def encode_with(self, g: DepGraph, assignment: PlaneAssignment) -> LabelSeq:
        planes = add_null_arcs(assignment, g.n, self.k).planes
        bits = [[] for _ in range(g.n + 1)]
        kept: Dict[int, List] = defaultdict(list)
        for j, plane in enumerate(planes, start=1):
            parent: Dict[int, Arc] = {a.dep: a for a in plane}
            far = _farthest(plane)
            left_deps = {a.head for a in plane if not a.is_rightward}
            right_deps = {a.head for a in plane if a.is_rightward}
            for i in range(1, g.n + 1):
                arc = parent[i]
                from_left = arc.is_rightward
                farthest = far[arc.head][0 if from_left else 1] == i
                group = (from_left, farthest, i in left_deps, i in right_deps)
                bits[i].append("".join("1" if b else "0" for b in group))
                rel = arc.relation if arc.kind == ArcKind.REGULAR else NULL_RELATION
                kept[i].append(((arc.head, j), rel))
        structural = ["".join(bits[i]) for i in range(1, g.n + 1)]
        return self._finish(g, structural, kept, len(assignment.regular_overflow))

    def _candidates(self, parsed, n, repairs):
        out: List[Candidate] = []
        for j in range(self.k):
            from_left, pop, left_deps, right_deps = self.columns(parsed, j)
            from_right = [False] + [not b for b in from_left[1:]]
            self._rightward_pass(n, from_left, pop, right_deps, j + 1, repairs, out, orphan=False)
            self._leftward_pass(n, from_right, pop, left_deps, j + 1, repairs, out, orphan=False)
        return out


class Bits6Encoding(BitEncoding):
    """Per pair j, bits 0-2 describe the rightward plane (has parent, is
    farthest dependent, has dependents) and bits 3-5 the leftward one."""

    family = EncodingFamily.BITS6
    width = 6

    def assign(self, g: DepGraph) -> DirectionPairs:
        pairs = assign_direction_pairs(g.structural_arcs, self.k)
        if pairs.regular_overflow:
            planes = get_encoding(EncodingSpec(family=EncodingFamily.BITS4, k=self.k)).assign(g)
            derived = pairs_from_planes(planes).padded(self.k)
            if len(derived.regular_overflow) < len(pairs.regular_overflow):
                logger.debug(f"{g.sentence_id or 'sentence'}: 6k pairs taken from the 4k plane split")
                pairs = derived
        return attach_root_arcs(pairs, g.root_arcs)

    def encode_with(self, g: DepGraph, assignment: DirectionPairs) -> LabelSeq:
        pairs = assignment.padded(self.k)
        bits = [[] for _ in range(g.n + 1)]
        kept: Dict[int, List] = defaultdict(list)
        for j in range(1, self.k + 1):
            group = [[False] * 6 for _ in range(g.n + 1)]
            for offset, plane in zip((0, 3), pairs.pair(j)):
                far = _farthest(plane)
                for arc in plane:
                    side = 0 if arc.is_rightward else 1
                    group[arc.dep][offset] = True
                    group[arc.dep][offset + 1] = far[arc.head][side] == arc.dep
                    if arc.head:
                        group[arc.head][offset + 2] = True
                    rel = NULL_RELATION if arc.is_root else arc.relation
                    kept[arc.dep].append(((arc.head, j), rel))
            for i in range(1, g.n + 1):
                bits[i].append("".join("1" if b else "0" for b in group[i]))
        structural = ["".join(bits[i]) for i in range(1, g.n + 1)]
        return self._finish(g, structural, kept, len(pairs.regular_overflow))

    def _candidates(self, parsed, n, repairs):
        out: List[Candidate] = []
        for j in range(self.k):
            bit = self.columns(parsed, j)
            self._rightward_pass(n, bit[0], bit[1], bit[2], j + 1, repairs, out)
            self._leftward_pass(n, bit[3], bit[4], bit[5], j + 1, repairs, out)
        return out


_FAMILIES = {
    EncodingFamily.ABSOLUTE: AbsolutePositional,
    EncodingFamily.RELATIVE: RelativePositional,
    EncodingFamily.BRACKET: BracketEncoding,
    EncodingFamily.BITS4: Bits4Encoding,
    EncodingFamily.BITS6: Bits6Encoding,
}


@lru_cache(maxsize=None)
def get_encoding(spec: EncodingSpec) -> Encoding:
    return _FAMILIES[spec.family](spec)


def encode(g: DepGraph, spec: Union[EncodingSpec, str]) -> LabelSeq:
    return get_encoding(EncodingSpec.parse(spec)).encode(g)


def decode(
    labels: LabelSeq,
    spec: Union[EncodingSpec, str],
    strict: bool = False,
    tokens: Optional[Sequence[Token]] = None,
    sentence_id: str = "",
) -> DepGraph:
    return get_encoding(EncodingSpec.parse(spec)).decode(labels, strict=strict, tokens=tokens, sentence_id=sentence_id)


def repair_report(labels: LabelSeq, spec: Union[EncodingSpec, str]) -> RepairReport:
    _, repairs = get_encoding(EncodingSpec.parse(spec)).audit(labels)
    return RepairReport(well_formed=not repairs, repairs=repairs)
