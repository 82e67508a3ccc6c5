# graphlin/synth.py
"""Seeded synthetic data: random dependency graphs, random projective trees
and random (syntactically valid, possibly ill-formed) label sequences."""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

import networkx as nx
import numpy as np

from .config import NULL_RELATION
from .encodings import EncodingFamily, EncodingSpec, LabelSeq
from .formats import CorpusDocument, SourceFormat
from .graph import Arc, DepGraph

logger = logging.getLogger(__name__)

RELATIONS = ("ARG1", "ARG2", "BV", "compound", "mod")
ROOT_RELATION = "root"


def random_graph(
    rng: np.random.Generator,
    n: int,
    density: float = 0.8,
    rightward_bias: float = 0.5,
    allow_cycles: bool = True,
    root_prob: float = 0.15,
    relations: Sequence[str] = RELATIONS,
    sentence_id: str = "",
) -> DepGraph:
    """About `density * n` token-to-token arcs; each arc points right with
    probability `rightward_bias`. Reentrancy and isolated tokens happen
    naturally; cycles only when allowed."""
    target = min(int(round(density * n)), n * (n - 1))
    pairs = set()
    dg = nx.DiGraph()
    attempts = 0
    while len(pairs) < target and attempts < 20 * target + 20:
        attempts += 1
        dep = int(rng.integers(1, n + 1))
        rightward = rng.random() < rightward_bias
        if rightward and dep > 1:
            head = int(rng.integers(1, dep))
        elif not rightward and dep < n:
            head = int(rng.integers(dep + 1, n + 1))
        else:
            continue
        if (head, dep) in pairs:
            continue
        if not allow_cycles and dg.has_node(dep) and dg.has_node(head) and nx.has_path(dg, dep, head):
            continue
        pairs.add((head, dep))
        dg.add_edge(head, dep)

    arcs = [Arc(h, d, relations[int(rng.integers(len(relations)))]) for h, d in sorted(pairs)]
    arcs.extend(Arc(0, i, ROOT_RELATION) for i in range(1, n + 1) if rng.random() < root_prob)
    return DepGraph.from_arcs(n, arcs, sentence_id=sentence_id)


def random_projective_tree(rng: np.random.Generator, n: int, sentence_id: str = "") -> DepGraph:
    """Single-rooted projective tree: pick a head for each span, recurse on both sides."""
    arcs: List[Arc] = []
    # (lo, hi, parent) spans still to build
    spans = [(1, n, 0)]
    while spans:
        lo, hi, parent = spans.pop()
        if lo > hi:
            continue
        head = int(rng.integers(lo, hi + 1))
        relation = ROOT_RELATION if parent == 0 else RELATIONS[int(rng.integers(len(RELATIONS)))]
        arcs.append(Arc(parent, head, relation))
        spans.append((lo, head - 1, head))
        spans.append((head + 1, hi, head))
    return DepGraph.from_arcs(n, arcs, sentence_id=sentence_id)


def generate_corpus(
    count: int,
    seed: int = 0,
    min_n: int = 1,
    max_n: int = 20,
    density: float = 0.8,
    rightward_bias: float = 0.5,
    allow_cycles: bool = True,
    root_prob: float = 0.15,
    trees: bool = False,
) -> CorpusDocument:
    rng = np.random.default_rng(seed)
    sentences = []
    for idx in range(1, count + 1):
        n = int(rng.integers(min_n, max_n + 1))
        sid = f"synth-{idx}"
        if trees:
            sentences.append(random_projective_tree(rng, n, sentence_id=sid))
        else:
            sentences.append(
                random_graph(
                    rng,
                    n,
                    density=density,
                    rightward_bias=rightward_bias,
                    allow_cycles=allow_cycles,
                    root_prob=root_prob,
                    sentence_id=sid,
                )
            )
    logger.info(f"generated {count} synthetic sentence(s) with seed {seed}")
    return CorpusDocument(sentences=tuple(sentences), source_format=SourceFormat.SDP)


def _random_structural(rng: np.random.Generator, spec: EncodingSpec, i: int, n: int) -> str:
    family = spec.family
    if family.positional:
        size = int(rng.integers(0, 4))
        values = sorted(int(v) for v in rng.integers(-2, n + 3, size=size))
        if family == EncodingFamily.RELATIVE:
            values = [v - i for v in values]
        return "(" + ",".join(str(v) for v in values) + ")"
    if family == EncodingFamily.BRACKET:
        parts = []
        for _ in range(int(rng.integers(0, 5))):
            sym = "<>/\\"[int(rng.integers(4))]
            parts.append(sym + "*" * int(rng.integers(0, spec.k)))
        return "".join(parts)
    width = 4 if family == EncodingFamily.BITS4 else 6
    return "".join("1" if b else "0" for b in rng.random(width * spec.k) < 0.5)


def random_labels(
    rng: np.random.Generator,
    spec: EncodingSpec,
    n: int,
    relations: Sequence[str] = RELATIONS,
    null_prob: float = 0.2,
    root_prob: Optional[float] = 0.1,
) -> LabelSeq:
    """Labels that parse under the family grammar but need not be well-formed."""
    structural = tuple(_random_structural(rng, spec, i, n) for i in range(1, n + 1))
    pool = tuple(relations) + (NULL_RELATION,)
    rels = []
    for _ in range(n):
        size = int(rng.integers(0, 4))
        rels.append(tuple(pool[-1] if rng.random() < null_prob else pool[int(rng.integers(len(relations)))] for _ in range(size)))
    roots = tuple(ROOT_RELATION if root_prob and rng.random() < root_prob else None for _ in range(n))
    return LabelSeq(structural=structural, relations=tuple(rels), roots=roots)
