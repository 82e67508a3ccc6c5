# graphlin/pipeline.py
"""Document-level drivers: run encode / decode over every sentence of a
corpus, optionally across worker processes, always in input order."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

from .config import CHUNK_SIZE, DEFAULT_JOBS
from .encodings import EncodingSpec, LabelSeq, get_encoding
from .errors import IllFormedError
from .formats import SDP_HEADER, CorpusDocument, LabelDocument, LabeledSentence, SourceFormat
from .graph import DepGraph

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_sentences(func: Callable[[T], R], items: Sequence[T], jobs: int = DEFAULT_JOBS, chunk_size: int = CHUNK_SIZE) -> List[R]:
    """Ordered map; with jobs > 1 the work is spread over a process pool.

    `func` must be picklable (a module-level function or a partial of one).
    """
    if jobs <= 1 or len(items) <= chunk_size:
        return [func(x) for x in items]
    logger.debug(f"mapping {len(items)} sentence(s) over {jobs} worker(s)")
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=chunk_size))


def _encode_one(spec: EncodingSpec, g: DepGraph) -> LabelSeq:
    return get_encoding(spec).encode(g)


def _decode_one(spec: EncodingSpec, strict: bool, sent: LabeledSentence) -> Tuple[DepGraph, int]:
    g, repairs = get_encoding(spec).audit(sent.labels, tokens=sent.tokens(), sentence_id=sent.sentence_id)
    if repairs and strict:
        raise IllFormedError(repairs)
    return g, len(repairs)


def _roundtrip_one(spec: EncodingSpec, g: DepGraph) -> DepGraph:
    enc = get_encoding(spec)
    return enc.decode(enc.encode(g), tokens=g.tokens, sentence_id=g.sentence_id)


def encode_document(doc: CorpusDocument, spec: EncodingSpec, jobs: int = DEFAULT_JOBS) -> List[LabelSeq]:
    labels = map_sentences(partial(_encode_one, spec), doc.sentences, jobs)
    dropped = sum(seq.coverage.dropped_arcs for seq in labels)
    total = sum(seq.coverage.total_arcs for seq in labels)
    if dropped:
        lossy = sum(1 for seq in labels if seq.coverage.dropped_arcs)
        logger.warning(f"{spec}: dropped {dropped} of {total} arc(s) in {lossy} sentence(s)")
    else:
        logger.info(f"{spec}: encoded {len(labels)} sentence(s), {total} arc(s), none dropped")
    return labels


def decode_document(
    labels: LabelDocument,
    strict: bool = False,
    jobs: int = DEFAULT_JOBS,
    source_format: SourceFormat = SourceFormat.SDP,
) -> CorpusDocument:
    results = map_sentences(partial(_decode_one, labels.spec, strict), labels.sentences, jobs)
    repaired = [n for _, n in results if n]
    if repaired:
        logger.info(f"{labels.spec}: repaired {len(repaired)} sentence(s), {sum(repaired)} repair(s) in total")
    header: Optional[str] = SDP_HEADER if source_format == SourceFormat.SDP else None
    return CorpusDocument(sentences=tuple(g for g, _ in results), source_format=source_format, header=header)


def roundtrip(doc: CorpusDocument, spec: EncodingSpec, jobs: int = DEFAULT_JOBS) -> CorpusDocument:
    """decode(encode(g)) for every sentence; the graphs an oracle tagger would produce."""
    return doc.with_sentences(map_sentences(partial(_roundtrip_one, spec), doc.sentences, jobs))
