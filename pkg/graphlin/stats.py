# graphlin/stats.py
"""Treebank statistics (planarity, density, cycles) and label-space sizes."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict

from .config import DEFAULT_JOBS, NULL_RELATION
from .encodings import EncodingSpec
from .formats import CorpusDocument
from .graph import DepGraph, Ratio, cycle_count
from .pipeline import encode_document
from .planes import IncompatibilityRule, greedy_assign

logger = logging.getLogger(__name__)

EXACT_PLANES_MAX_N = 7


def exact_plane_count(g: DepGraph, rule: IncompatibilityRule = IncompatibilityRule.SAME_DIRECTION_CROSS) -> int:
    """Minimum number of planes, by backtracking over plane colorings.

    Exponential; meant for short sentences only.
    """
    arcs = list(g.structural_arcs)
    if not arcs:
        return 0
    m = len(arcs)
    conflicts = [[y for y in range(m) if y != x and rule.conflicts(arcs[x], arcs[y])] for x in range(m)]
    order = sorted(range(m), key=lambda x: -len(conflicts[x]))

    def colorable(k: int) -> bool:
        color = [-1] * m

        def place(pos: int) -> bool:
            if pos == m:
                return True
            x = order[pos]
            taken = {color[y] for y in conflicts[x]}
            # a fresh plane is interchangeable with any other unused one
            highest = max(color) + 1
            for c in range(min(k, highest + 1)):
                if c not in taken:
                    color[x] = c
                    if place(pos + 1):
                        return True
            color[x] = -1
            return False

        return place(0)

    k = 1
    while not colorable(k):
        k += 1
    return k


def sentence_frame(doc: CorpusDocument, oracle: bool = False) -> pd.DataFrame:
    """One row per sentence with the counts every aggregate is built from."""
    rows = []
    for g in doc.sentences:
        structural = len(g.structural_arcs)
        row = {
            "sentence_id": g.sentence_id,
            "n": g.n,
            "arcs": len(g.arcs),
            "structural_arcs": structural,
            "root_arcs": len(g.arcs) - structural,
            "planes": greedy_assign(g.structural_arcs).used,
            "cycles": cycle_count(g),
        }
        if oracle:
            row["exact_planes"] = exact_plane_count(g) if g.n <= EXACT_PLANES_MAX_N else None
        rows.append(row)
    columns = ["sentence_id", "n", "arcs", "structural_arcs", "root_arcs", "planes", "cycles"]
    if oracle:
        columns.append("exact_planes")
    return pd.DataFrame(rows, columns=columns)


class CorpusStats(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    sentence_count: int
    token_count: int
    zero_arc_sentences: int
    plane_distribution: Dict[int, Ratio]
    max_planes: int
    exact_plane_distribution: Optional[Dict[int, Ratio]] = None
    avg_in_degree: Ratio
    avg_out_degree: Ratio
    arcs_per_graph: Ratio
    avg_length: Ratio
    cycle_sentences: int
    cycle_count: int


def _distribution(values: pd.Series) -> Dict[int, Fraction]:
    total = int(values.size)
    if not total:
        return {}
    counts = values.astype(int).value_counts().sort_index()
    return {int(k): Fraction(int(v), total) for k, v in counts.items()}


def corpus_stats(docs: Union[CorpusDocument, Sequence[CorpusDocument]], oracle: bool = False) -> CorpusStats:
    """Aggregate statistics over one or more documents.

    Plane counts come from the greedy assignment and only cover sentences
    with at least one token-to-token arc. In-degree counts root arcs as
    heads; out-degree counts token-to-token arcs only.
    """
    if isinstance(docs, CorpusDocument):
        docs = [docs]
    frames = [sentence_frame(d, oracle) for d in docs]
    df = pd.concat(frames, ignore_index=True) if frames else sentence_frame(CorpusDocument(), oracle)

    sentences = len(df)
    tokens = int(df["n"].sum())
    arcs = int(df["arcs"].sum())
    structural = int(df["structural_arcs"].sum())
    with_arcs = df[df["structural_arcs"] > 0]

    exact = None
    if oracle:
        exact = _distribution(with_arcs["exact_planes"].dropna())
        skipped = int(with_arcs["exact_planes"].isna().sum())
        if skipped:
            logger.info(f"exact plane count skipped for {skipped} sentence(s) longer than {EXACT_PLANES_MAX_N}")

    return CorpusStats(
        sentence_count=sentences,
        token_count=tokens,
        zero_arc_sentences=sentences - len(with_arcs),
        plane_distribution=_distribution(with_arcs["planes"]),
        max_planes=int(df["planes"].max()) if sentences else 0,
        exact_plane_distribution=exact,
        avg_in_degree=Fraction(arcs, tokens) if tokens else Fraction(0),
        avg_out_degree=Fraction(structural, tokens) if tokens else Fraction(0),
        arcs_per_graph=Fraction(arcs, sentences) if sentences else Fraction(0),
        avg_length=Fraction(tokens, sentences) if sentences else Fraction(0),
        cycle_sentences=int((df["cycles"] > 0).sum()),
        cycle_count=int(df["cycles"].sum()),
    )


class VocabEntry(BaseModel):
    spec: str
    structural_labels: int
    relations: int
    label_bound: Optional[int] = None


class VocabStats(BaseModel):
    entries: List[VocabEntry]

    def by_spec(self) -> Dict[str, VocabEntry]:
        return {e.spec: e for e in self.entries}


def vocab_stats(
    doc: CorpusDocument,
    specs: Sequence[Union[EncodingSpec, str]],
    jobs: int = DEFAULT_JOBS,
) -> VocabStats:
    """Distinct structural labels and distinct relation strings each encoding
    produces over a full pass of the corpus."""
    entries = []
    for spec in specs:
        spec = EncodingSpec.parse(spec)
        structural = set()
        relations = set()
        for seq in encode_document(doc, spec, jobs):
            structural.update(seq.structural)
            for rels in seq.relations:
                relations.update(r for r in rels if r != NULL_RELATION)
            relations.update(r for r in seq.roots if r is not None)
        bound = spec.label_bound
        assert bound is None or len(structural) <= bound, f"{spec}: {len(structural)} labels exceed {bound}"
        entries.append(VocabEntry(spec=str(spec), structural_labels=len(structural), relations=len(relations), label_bound=bound))
    return VocabStats(entries=entries)
