# graphlin/formats.py
"""Readers and writers for SDP 2015, CoNLL-U (enhanced DEPS) and the label
TSV format, plus the six-token worked example used throughout the tests."""

from __future__ import annotations

import contextlib
import logging
import re
import sys
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError

from .config import EMPTY_FIELD, NULL_RELATION
from .encodings import EncodingFamily, EncodingSpec, LabelSeq, CoverageReport
from .errors import FormatError, LabelError, SpecError
from .graph import Arc, DepGraph, Token

logger = logging.getLogger(__name__)

SDP_HEADER = "#SDP 2015"
MWT_KEY = "_mwt"
CONLLU_COLUMNS = ("lemma", "upos", "xpos", "feats", "head", "deprel")
_RESERVED = re.compile(r"[|\t\n]")


class SourceFormat(str, Enum):
    SDP = "sdp"
    CONLLU = "conllu"


class CorpusDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    sentences: Tuple[DepGraph, ...] = ()
    source_format: SourceFormat = SourceFormat.SDP
    header: Optional[str] = None

    def __len__(self) -> int:
        return len(self.sentences)

    def with_sentences(self, sentences: Iterable[DepGraph]) -> "CorpusDocument":
        return self.model_copy(update={"sentences": tuple(sentences)})


@contextlib.contextmanager
def open_text(path: str, mode: str = "r") -> Iterator[TextIO]:
    """Open a UTF-8 text file; "-" means stdin or stdout."""
    if path == "-":
        yield sys.stdout if "w" in mode else sys.stdin
        return
    with open(path, mode, encoding="utf-8", newline="\n" if "w" in mode else None) as fh:
        yield fh


def _blocks(stream: TextIO) -> Iterator[Tuple[int, List[str]]]:
    """Yield (first line number, lines) for each blank-line separated block."""
    block: List[str] = []
    start = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if block:
                yield start, block
            block = []
            continue
        if not block:
            start = lineno
        block.append(line)
    if block:
        yield start, block


def _graph(tokens, arcs, sentence_id, comments, path, line) -> DepGraph:
    try:
        return DepGraph(tokens=tuple(tokens), arcs=tuple(arcs), sentence_id=sentence_id, comments=tuple(comments))
    except ValidationError as e:
        first = e.errors()[0]
        raise FormatError(f"invalid sentence {sentence_id!r}: {first['msg']}", path, line) from None


def _check_arcs(located: Sequence[Tuple[Arc, int]], n: int, path) -> None:
    """Reject the arcs a graph would refuse, naming the token line they came from."""
    seen = set()
    for arc, lineno in located:
        if arc.head == arc.dep:
            raise FormatError(f"self-loop on token {arc.dep}", path, lineno)
        if arc.head > n:
            raise FormatError(f"head {arc.head} is outside 0..{n}", path, lineno)
        if arc.pair in seen:
            raise FormatError(f"duplicate arc {arc.head}->{arc.dep}", path, lineno)
        seen.add(arc.pair)


def _check_relation(rel: str, path, line) -> None:
    if rel == NULL_RELATION:
        raise FormatError(f"relation {NULL_RELATION!r} is reserved", path, line)
    if not rel or _RESERVED.search(rel):
        raise FormatError(f"invalid relation {rel!r}", path, line)


#
# SDP 2015
#


def read_sdp(stream: TextIO, path: Optional[str] = None) -> CorpusDocument:
    """Read SDP 2015 (or 2014, without the frame column).

    Top nodes become root arcs labeled TOP; the j-th argument column belongs
    to the j-th predicate in sentence order.
    """
    header = None
    sentences = []
    for start, lines in _blocks(stream):
        if not sentences and header is None and lines[0].startswith("#SDP"):
            header = lines[0]
            lines = lines[1:]
            start += 1
            if not lines:
                continue
        sentence_id = ""
        comments = []
        rows: List[Tuple[int, List[str]]] = []
        for offset, line in enumerate(lines):
            if line.startswith("#") and not rows:
                if not sentence_id and not comments:
                    sentence_id = line[1:]
                else:
                    comments.append(line)
                continue
            rows.append((start + offset, line.split("\t")))
        sentences.append(_sdp_sentence(rows, sentence_id, comments, path))
    logger.info(f"read {len(sentences)} SDP sentence(s) from {path or '<stream>'}")
    return CorpusDocument(sentences=tuple(sentences), source_format=SourceFormat.SDP, header=header)


def _sdp_sentence(rows, sentence_id, comments, path) -> DepGraph:
    for lineno, cols in rows:
        if len(cols) < 6:
            raise FormatError(f"expected at least 6 columns, found {len(cols)}", path, lineno)
        if cols[5] not in ("+", "-") or cols[4] not in ("+", "-"):
            raise FormatError("top and pred columns must be '+' or '-'", path, lineno)
    predicates = [i for i, (_, cols) in enumerate(rows, start=1) if cols[5] == "+"]

    tokens = []
    arcs: List[Tuple[Arc, int]] = []
    for i, (lineno, cols) in enumerate(rows, start=1):
        if cols[0] != str(i):
            raise FormatError(f"token id {cols[0]!r} where {i} was expected", path, lineno)
        if len(cols) == 7 + len(predicates):
            frame, args = cols[6], cols[7:]
        elif len(cols) == 6 + len(predicates):
            frame, args = EMPTY_FIELD, cols[6:]
        else:
            raise FormatError(f"{len(cols)} columns do not fit {len(predicates)} predicate(s)", path, lineno)
        extra = {"lemma": cols[2], "pos": cols[3], "pred": cols[5], "frame": frame}
        tokens.append(Token(index=i, form=cols[1], extra=extra))
        if cols[4] == "+":
            arcs.append((Arc(0, i, "TOP"), lineno))
        for head, cell in zip(predicates, args):
            if cell != EMPTY_FIELD:
                _check_relation(cell, path, lineno)
                arcs.append((Arc(head, i, cell), lineno))
    _check_arcs(arcs, len(tokens), path)
    return _graph(tokens, [a for a, _ in arcs], sentence_id, comments, path, rows[0][0] if rows else None)


def write_sdp(stream: TextIO, doc: CorpusDocument) -> None:
    """Write SDP 2015; predicates are the heads of token-to-token arcs plus
    any token flagged as predicate on input."""
    if doc.header:
        stream.write(doc.header + "\n")
    for g in doc.sentences:
        if g.sentence_id:
            stream.write(f"#{g.sentence_id}\n")
        for line in g.comments:
            stream.write(line + "\n")
        heads = {a.head for a in g.structural_arcs}
        predicates = sorted(heads | {t.index for t in g.tokens if t.extra.get("pred") == "+"})
        cells: Dict[Tuple[int, int], str] = {(a.head, a.dep): a.relation for a in g.structural_arcs}
        tops = {a.dep for a in g.root_arcs}
        for token in g.tokens:
            i = token.index
            row = [
                str(i),
                token.form,
                token.extra.get("lemma", EMPTY_FIELD),
                token.extra.get("pos", EMPTY_FIELD),
                "+" if i in tops else "-",
                "+" if i in predicates else "-",
                token.extra.get("frame", EMPTY_FIELD),
            ]
            row.extend(cells.get((p, i), EMPTY_FIELD) for p in predicates)
            stream.write("\t".join(row) + "\n")
        stream.write("\n")


#
# CoNLL-U, enhanced DEPS
#


def read_conllu_enhanced(stream: TextIO, path: Optional[str] = None, keep_empty_nodes: bool = False) -> CorpusDocument:
    """Build graphs from the DEPS column only.

    Sentences with empty nodes (decimal ids) are skipped with a warning;
    with `keep_empty_nodes` they are refused with a FormatError instead,
    since empty nodes have no token position to live on.
    """
    sentences = []
    skipped = 0
    for start, lines in _blocks(stream):
        g = _conllu_sentence(start, lines, path, keep_empty_nodes)
        if g is None:
            skipped += 1
            continue
        sentences.append(g)
    if skipped:
        logger.warning(f"skipped {skipped} sentence(s) with empty nodes in {path or '<stream>'}")
    logger.info(f"read {len(sentences)} CoNLL-U sentence(s) from {path or '<stream>'}")
    return CorpusDocument(sentences=tuple(sentences), source_format=SourceFormat.CONLLU)


def _conllu_sentence(start, lines, path, keep_empty_nodes) -> Optional[DepGraph]:
    for lineno, line in enumerate(lines, start=start):
        ident = line.split("\t", 1)[0]
        if not line.startswith("#") and "." in ident:
            if keep_empty_nodes:
                raise FormatError(f"empty node {ident} cannot be represented", path, lineno)
            logger.debug(f"{path or '<stream>'}:{start}: empty node {ident}, sentence skipped")
            return None
    comments = []
    sentence_id = ""
    tokens = []
    arcs: List[Tuple[Arc, int]] = []
    pending_mwt = None
    for lineno, line in enumerate(lines, start=start):
        if line.startswith("#"):
            comments.append(line)
            m = re.match(r"#\s*sent_id\s*=\s*(.*)$", line)
            if m:
                sentence_id = m.group(1).strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise FormatError(f"expected 10 columns, found {len(cols)}", path, lineno)
        ident = cols[0]
        if "-" in ident:
            pending_mwt = line
            continue
        i = len(tokens) + 1
        if ident != str(i):
            raise FormatError(f"token id {ident!r} where {i} was expected", path, lineno)
        extra = dict(zip(CONLLU_COLUMNS, cols[2:8]))
        extra["misc"] = cols[9]
        if pending_mwt is not None:
            extra[MWT_KEY] = pending_mwt
            pending_mwt = None
        tokens.append(Token(index=i, form=cols[1], extra=extra))
        arcs.extend((arc, lineno) for arc in _parse_deps(cols[8], i, path, lineno))
    _check_arcs(arcs, len(tokens), path)
    return _graph(tokens, [a for a, _ in arcs], sentence_id, comments, path, start)


def _parse_deps(deps: str, dep: int, path, lineno) -> List[Arc]:
    if deps == EMPTY_FIELD:
        return []
    out = []
    for item in deps.split("|"):
        head, sep, rel = item.partition(":")
        if not sep or not head.isdigit():
            raise FormatError(f"malformed DEPS entry {item!r}", path, lineno)
        _check_relation(rel, path, lineno)
        out.append(Arc(int(head), dep, rel))
    return out


def write_conllu(stream: TextIO, doc: CorpusDocument) -> None:
    for g in doc.sentences:
        comments = list(g.comments)
        if g.sentence_id and not any(re.match(r"#\s*sent_id\s*=", c) for c in comments):
            comments.insert(0, f"# sent_id = {g.sentence_id}")
        for line in comments:
            stream.write(line + "\n")
        incoming: Dict[int, List[Arc]] = {}
        for arc in g.arcs:
            incoming.setdefault(arc.dep, []).append(arc)
        for token in g.tokens:
            if MWT_KEY in token.extra:
                stream.write(token.extra[MWT_KEY] + "\n")
            arcs = sorted(incoming.get(token.index, ()), key=lambda a: a.head)
            deps = "|".join(f"{a.head}:{a.relation}" for a in arcs) or EMPTY_FIELD
            row = [str(token.index), token.form]
            row.extend(token.extra.get(col, EMPTY_FIELD) for col in CONLLU_COLUMNS)
            row.append(deps)
            row.append(token.extra.get("misc", EMPTY_FIELD))
            stream.write("\t".join(row) + "\n")
        stream.write("\n")


def read_corpus(path: str, fmt: SourceFormat, keep_empty_nodes: bool = False) -> CorpusDocument:
    with open_text(path) as fh:
        if fmt == SourceFormat.SDP:
            return read_sdp(fh, path)
        return read_conllu_enhanced(fh, path, keep_empty_nodes=keep_empty_nodes)


def write_corpus(path: str, doc: CorpusDocument, fmt: SourceFormat) -> None:
    with open_text(path, "w") as fh:
        if fmt == SourceFormat.SDP:
            write_sdp(fh, doc)
        else:
            write_conllu(fh, doc)


#
# label TSV
#


class LabeledSentence(BaseModel):
    model_config = ConfigDict(frozen=True)

    sentence_id: str = ""
    forms: Tuple[str, ...]
    labels: LabelSeq

    def tokens(self) -> List[Token]:
        return [Token(index=i, form=f) for i, f in enumerate(self.forms, start=1)]


class LabelDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: EncodingSpec
    sentences: Tuple[LabeledSentence, ...] = ()

    def __len__(self) -> int:
        return len(self.sentences)

    @property
    def coverage(self) -> CoverageReport:
        total = CoverageReport()
        for s in self.sentences:
            total = total.merge(s.labels.coverage)
        return total


def render_relations(rels: Sequence[str]) -> str:
    for rel in rels:
        if not rel or _RESERVED.search(rel):
            raise LabelError(f"relation {rel!r} cannot be written to a label file")
    return "|".join(rels) if rels else EMPTY_FIELD


def labeled_sentences(doc: CorpusDocument, labels: Sequence[LabelSeq]) -> List[LabeledSentence]:
    if len(labels) != len(doc.sentences):
        raise LabelError(f"{len(labels)} label sequence(s) for {len(doc.sentences)} sentence(s)")
    out = []
    for g, seq in zip(doc.sentences, labels):
        if seq.n != g.n:
            raise LabelError(f"sentence {g.sentence_id or '?'}: {seq.n} label(s) for {g.n} token(s)")
        out.append(LabeledSentence(sentence_id=g.sentence_id, forms=tuple(t.form for t in g.tokens), labels=seq))
    return out


def write_labels(stream: TextIO, spec: EncodingSpec, doc: CorpusDocument, labels: Sequence[LabelSeq]) -> None:
    """Write one 5-column row per token: index, form, structural label,
    relations (d_i joined by "|"), root relation."""
    stream.write(f"# encoding={spec}\n")
    for sent in labeled_sentences(doc, labels):
        if sent.sentence_id:
            stream.write(f"# sent_id={sent.sentence_id}\n")
        cov = sent.labels.coverage
        stream.write(f"# coverage={cov.dropped_arcs}/{cov.total_arcs}\n")
        seq = sent.labels
        for i, form in enumerate(sent.forms, start=1):
            row = [
                str(i),
                form,
                seq.structural[i - 1] or EMPTY_FIELD,
                render_relations(seq.relations[i - 1]),
                seq.roots[i - 1] if seq.roots[i - 1] is not None else EMPTY_FIELD,
            ]
            stream.write("\t".join(row) + "\n")
        stream.write("\n")


def read_labels(stream: TextIO, path: Optional[str] = None) -> LabelDocument:
    spec = None
    sentences = []
    for start, lines in _blocks(stream):
        sentence_id = ""
        coverage = CoverageReport()
        rows = []
        for lineno, line in enumerate(lines, start=start):
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                key = key.strip()
                if key == "encoding":
                    try:
                        spec = EncodingSpec.parse(value)
                    except SpecError as e:
                        raise FormatError(str(e), path, lineno) from None
                elif key == "sent_id":
                    sentence_id = value
                elif key == "coverage":
                    dropped, _, total = value.partition("/")
                    if not (dropped.isdigit() and total.isdigit()):
                        raise FormatError(f"bad coverage comment {line!r}", path, lineno)
                    coverage = CoverageReport(dropped_arcs=int(dropped), total_arcs=int(total))
                continue
            if spec is None:
                raise FormatError("label file must start with '# encoding=<spec>'", path, lineno)
            cols = line.split("\t")
            if len(cols) != 5:
                raise FormatError(f"expected 5 columns, found {len(cols)}", path, lineno)
            if cols[0] != str(len(rows) + 1):
                raise FormatError(f"row index {cols[0]!r} where {len(rows) + 1} was expected", path, lineno)
            rows.append(cols)
        if not rows:
            continue
        empty_structural = spec.family == EncodingFamily.BRACKET
        sentences.append(
            LabeledSentence(
                sentence_id=sentence_id,
                forms=tuple(c[1] for c in rows),
                labels=LabelSeq(
                    structural=tuple("" if empty_structural and c[2] == EMPTY_FIELD else c[2] for c in rows),
                    relations=tuple(() if c[3] == EMPTY_FIELD else tuple(c[3].split("|")) for c in rows),
                    roots=tuple(None if c[4] == EMPTY_FIELD else c[4] for c in rows),
                    coverage=coverage,
                ),
            )
        )
    if spec is None:
        raise FormatError("label file has no '# encoding=<spec>' header", path)
    return LabelDocument(spec=spec, sentences=tuple(sentences))


def fixture_fig1() -> DepGraph:
    """Six tokens, eight arcs, no root arcs; relaxed 2-planar and cyclic (3->5->6->3)."""
    pairs = [(2, 1), (2, 3), (3, 5), (4, 5), (5, 6), (6, 3), (1, 4), (1, 5)]
    return DepGraph.from_arcs(6, [Arc(h, d, "dep") for h, d in pairs], sentence_id="fig1")
