# graphlin/metrics.py
"""Arc-level evaluation: unlabeled / labeled precision, recall and F over
(head, dep[, relation]) items, root attachments included as head 0."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict

from .config import DEFAULT_JOBS
from .encodings import EncodingSpec, repair_report
from .errors import AlignmentError, LabelGrammarError
from .formats import CorpusDocument, LabelDocument
from .graph import DepGraph, Ratio, cycle_count
from .pipeline import roundtrip
from .planes import greedy_assign

logger = logging.getLogger(__name__)


def precision(matches: int, predicted: int) -> Fraction:
    return Fraction(matches, predicted) if predicted else Fraction(1)


def recall(matches: int, gold: int) -> Fraction:
    return Fraction(matches, gold) if gold else Fraction(1)


def f_score(p: Fraction, r: Fraction) -> Fraction:
    return 2 * p * r / (p + r) if p + r else Fraction(0)


class EvalResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    sentences: int
    gold_arcs: int
    predicted_arcs: int
    unlabeled_matches: int
    labeled_matches: int
    up: Ratio
    ur: Ratio
    uf: Ratio
    lp: Ratio
    lr: Ratio
    lf: Ratio
    um: Ratio
    lm: Ratio
    macro_uf: Optional[Ratio] = None
    macro_lf: Optional[Ratio] = None


class _Counts:
    __slots__ = ("sentences", "gold", "pred", "umatch", "lmatch", "uexact", "lexact", "macro_u", "macro_l")

    def __init__(self):
        self.sentences = self.gold = self.pred = self.umatch = self.lmatch = self.uexact = self.lexact = 0
        self.macro_u: List[Fraction] = []
        self.macro_l: List[Fraction] = []

    def add(self, gold: DepGraph, pred: DepGraph) -> None:
        gu, pu = gold.pairs(), pred.pairs()
        gl, pl = gold.labeled(), pred.labeled()
        um, lm = len(gu & pu), len(gl & pl)
        self.sentences += 1
        self.gold += len(gu)
        self.pred += len(pu)
        self.umatch += um
        self.lmatch += lm
        self.uexact += gu == pu
        self.lexact += gl == pl
        self.macro_u.append(f_score(precision(um, len(pu)), recall(um, len(gu))))
        self.macro_l.append(f_score(precision(lm, len(pl)), recall(lm, len(gl))))

    def result(self, macro: bool) -> EvalResult:
        up, ur = precision(self.umatch, self.pred), recall(self.umatch, self.gold)
        lp, lr = precision(self.lmatch, self.pred), recall(self.lmatch, self.gold)
        n = self.sentences
        return EvalResult(
            sentences=n,
            gold_arcs=self.gold,
            predicted_arcs=self.pred,
            unlabeled_matches=self.umatch,
            labeled_matches=self.lmatch,
            up=up,
            ur=ur,
            uf=f_score(up, ur),
            lp=lp,
            lr=lr,
            lf=f_score(lp, lr),
            um=Fraction(self.uexact, n) if n else Fraction(1),
            lm=Fraction(self.lexact, n) if n else Fraction(1),
            macro_uf=(sum(self.macro_u, Fraction(0)) / n if n else Fraction(1)) if macro else None,
            macro_lf=(sum(self.macro_l, Fraction(0)) / n if n else Fraction(1)) if macro else None,
        )


def _check_aligned(gold: CorpusDocument, pred: CorpusDocument) -> None:
    if len(gold.sentences) != len(pred.sentences):
        raise AlignmentError(f"gold has {len(gold.sentences)} sentence(s), prediction {len(pred.sentences)}")
    for idx, (g, p) in enumerate(zip(gold.sentences, pred.sentences), start=1):
        if g.n != p.n:
            raise AlignmentError(f"sentence {g.sentence_id or idx}: {g.n} gold token(s), {p.n} predicted")


def evaluate(gold: CorpusDocument, pred: CorpusDocument, macro: bool = False) -> EvalResult:
    """Micro-averaged scores over the corpus; `macro` adds per-sentence averages."""
    _check_aligned(gold, pred)
    counts = _Counts()
    for g, p in zip(gold.sentences, pred.sentences):
        counts.add(g, p)
    return counts.result(macro)


def plane_key(g: DepGraph) -> int:
    return greedy_assign(g.structural_arcs).used


BREAKDOWN_KEYS: Dict[str, Callable[[DepGraph], int]] = {
    "planes": plane_key,
    "cycles": cycle_count,
}


def evaluate_by(
    gold: CorpusDocument,
    pred: CorpusDocument,
    key: Union[str, Callable[[DepGraph], int]] = "planes",
    macro: bool = False,
) -> Dict[int, EvalResult]:
    """Scores grouped by a property of the gold graph (plane count or cycle count)."""
    _check_aligned(gold, pred)
    func = BREAKDOWN_KEYS[key] if isinstance(key, str) else key
    buckets: Dict[int, _Counts] = {}
    for g, p in zip(gold.sentences, pred.sentences):
        buckets.setdefault(func(g), _Counts()).add(g, p)
    return {k: buckets[k].result(macro) for k in sorted(buckets)}


def oracle_coverage(doc: CorpusDocument, spec: Union[EncodingSpec, str], jobs: int = DEFAULT_JOBS) -> EvalResult:
    """Scores of decode(encode(doc)) against doc: the best any tagger could do."""
    spec = EncodingSpec.parse(spec)
    result = evaluate(doc, roundtrip(doc, spec, jobs))
    logger.info(f"{spec}: oracle UF {float(result.uf):.4f}")
    return result


class TaggingResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    sentences: int
    tokens: int
    tag_accuracy: Ratio
    relation_accuracy: Ratio
    well_formed: Ratio


def tagging_report(gold: LabelDocument, pred: LabelDocument) -> TaggingResult:
    """Per-token accuracy of predicted labels and the share of predicted
    sequences that decode without any repair."""
    if gold.spec != pred.spec:
        raise AlignmentError(f"gold labels use {gold.spec}, predictions {pred.spec}")
    if len(gold.sentences) != len(pred.sentences):
        raise AlignmentError(f"gold has {len(gold.sentences)} sentence(s), prediction {len(pred.sentences)}")
    tokens = tags = rels = well_formed = 0
    for idx, (g, p) in enumerate(zip(gold.sentences, pred.sentences), start=1):
        gl, pl = g.labels, p.labels
        if gl.n != pl.n:
            raise AlignmentError(f"sentence {g.sentence_id or idx}: {gl.n} gold label(s), {pl.n} predicted")
        tokens += gl.n
        tags += sum(a == b for a, b in zip(gl.structural, pl.structural))
        rels += sum(
            ga == pa and gr == pr for ga, pa, gr, pr in zip(gl.relations, pl.relations, gl.roots, pl.roots)
        )
        try:
            well_formed += repair_report(pl, pred.spec).well_formed
        except LabelGrammarError:
            pass
    n = len(gold.sentences)
    return TaggingResult(
        sentences=n,
        tokens=tokens,
        tag_accuracy=Fraction(tags, tokens) if tokens else Fraction(1),
        relation_accuracy=Fraction(rels, tokens) if tokens else Fraction(1),
        well_formed=Fraction(well_formed, n) if n else Fraction(1),
    )
