"""graphlin: dependency graphs as sequence-labeling encodings."""

from .encodings import EncodingFamily, EncodingSpec, LabelSeq, decode, encode, repair_report
from .formats import CorpusDocument, fixture_fig1, read_conllu_enhanced, read_labels, read_sdp, write_labels
from .graph import Arc, ArcKind, DepGraph, Token
from .metrics import evaluate, oracle_coverage

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "ArcKind",
    "CorpusDocument",
    "DepGraph",
    "EncodingFamily",
    "EncodingSpec",
    "LabelSeq",
    "Token",
    "decode",
    "encode",
    "evaluate",
    "fixture_fig1",
    "oracle_coverage",
    "read_conllu_enhanced",
    "read_labels",
    "read_sdp",
    "repair_report",
    "write_labels",
]
