import numpy as np
import pytest
from hypothesis import given, strategies as st

from graphlin.encodings import (
    EncodingFamily,
    EncodingSpec,
    LabelSeq,
    RepairKind,
    decode,
    encode,
    get_encoding,
    parse_specs,
    repair_report,
)
from graphlin.errors import IllFormedError, LabelError, LabelGrammarError, SpecError
from graphlin.graph import Arc, DepGraph
from graphlin.planes import DirectionPairs, greedy_assign
from graphlin.synth import random_labels

from .conftest import graphs, projective_trees

ALL_SPECS = ["abs", "rel", "b:1", "b:2", "b:3", "b4:1", "b4:2", "b4:3", "b6:1", "b6:2", "b6:3"]


def groups_to_rows(*rows):
    """Join per-plane rows ("0100 1111 ...") into per-token labels."""
    split = [r.split() for r in rows]
    return tuple("".join(parts) for parts in zip(*split))


def labels(structural, relations=None, roots=None):
    n = len(structural)
    return LabelSeq(
        structural=tuple(structural),
        relations=tuple(relations) if relations is not None else ((),) * n,
        roots=tuple(roots) if roots is not None else (None,) * n,
    )


#
# specs
#


@pytest.mark.parametrize(
    "text,family,k,rendered",
    [
        ("abs", EncodingFamily.ABSOLUTE, 1, "abs"),
        ("abs:5", EncodingFamily.ABSOLUTE, 1, "abs"),
        ("relative", EncodingFamily.RELATIVE, 1, "rel"),
        ("b", EncodingFamily.BRACKET, 2, "b:2"),
        ("b:3", EncodingFamily.BRACKET, 3, "b:3"),
        ("b4", EncodingFamily.BITS4, 3, "b4:3"),
        ("4k:2", EncodingFamily.BITS4, 2, "b4:2"),
        (" B6:1 ", EncodingFamily.BITS6, 1, "b6:1"),
    ],
)
def test_parse_spec(text, family, k, rendered):
    spec = EncodingSpec.parse(text)
    assert (spec.family, spec.k, str(spec)) == (family, k, rendered)
    assert EncodingSpec.parse(str(spec)) == spec


@pytest.mark.parametrize("text", ["xyz", "b:0", "b4:x", "", "b6:-1"])
def test_parse_spec_errors(text):
    with pytest.raises(SpecError):
        EncodingSpec.parse(text)


def test_parse_specs_and_bounds():
    specs = parse_specs("abs, b:2,b4:1")
    assert [str(s) for s in specs] == ["abs", "b:2", "b4:1"]
    assert specs[0].label_bound is None
    assert specs[2].label_bound == 16
    assert EncodingSpec.parse("b6:2").label_bound == 4096
    with pytest.raises(SpecError):
        parse_specs(" , ")


def test_label_seq_lengths_must_agree():
    with pytest.raises(LabelError):
        LabelSeq(structural=("()", "()"), relations=((),), roots=(None, None))


#
# worked example
#


def test_positional_rows(fig1):
    abs_labels = encode(fig1, "abs")
    assert abs_labels.structural == ("(2)", "()", "(2,6)", "(1)", "(1,3,4)", "(5)")
    assert abs_labels.relations[4] == ("dep", "dep", "dep")
    assert abs_labels.relations[1] == ()
    rel_labels = encode(fig1, "rel")
    assert rel_labels.structural == ("(1)", "()", "(-1,3)", "(-3)", "(-4,-2,-1)", "(-1)")
    assert abs_labels.coverage.lossless and abs_labels.coverage.total_arcs == 8


def test_bits4_rows(fig1):
    seq = encode(fig1, "b4:3")
    assert seq.structural == groups_to_rows(
        "0100 1111 1101 1000 1101 1100",
        "1101 1000 0100 1000 1101 1110",
        "1101 1101 1101 1101 1101 1100",
    )
    # token 2 only has null / dummy parents
    assert seq.relations[1] == ("NULL", "NULL", "NULL")
    assert seq.relations[4] == ("dep", "dep", "dep")
    assert seq.coverage.lossless


def test_bits6_rows_canonical(fig1):
    seq = encode(fig1, "b6:3")
    assert seq.structural == groups_to_rows(
        "001110 001001 110110 100000 111000 110001",
        "000000 000000 001000 000000 110000 000000",
        "000000 000000 000000 001000 110000 000000",
    )
    assert seq.coverage.lossless


def test_bits6_rows_under_the_drawn_split(fig1):
    enc = get_encoding(EncodingSpec.parse("b6:3"))
    split = DirectionPairs(
        rightward=(
            (Arc(2, 3, "dep"), Arc(3, 5, "dep"), Arc(5, 6, "dep")),
            (Arc(1, 4, "dep"), Arc(1, 5, "dep")),
            (Arc(4, 5, "dep"),),
        ),
        leftward=((Arc(2, 1, "dep"), Arc(6, 3, "dep")), (), ()),
    )
    seq = enc.encode_with(fig1, split)
    assert seq.structural == groups_to_rows(
        "000110 001001 111110 000000 111000 110001",
        "001000 000000 000000 100000 110000 000000",
        "000000 000000 000000 001000 110000 000000",
    )
    assert enc.decode(seq).labeled() == fig1.labeled()


def test_bracket_rows(fig1):
    seq = encode(fig1, "b:2")
    assert seq.structural == ("<//", "\\/", "></*", ">/", ">>/>*", ">\\")
    assert seq.coverage.lossless
    one = encode(fig1, "b:1")
    assert (one.coverage.dropped_arcs, one.coverage.total_arcs) == (1, 8)
    assert decode(one, "b:1").pairs() == fig1.pairs() - {(3, 5)}


@pytest.mark.parametrize("spec", ["abs", "rel", "b:2", "b:3", "b4:3", "b6:3"])
def test_fig1_round_trip(fig1, spec):
    seq = encode(fig1, spec)
    g = decode(seq, spec, strict=True, tokens=fig1.tokens, sentence_id=fig1.sentence_id)
    assert g == fig1


@pytest.mark.parametrize("spec,expected", [("b4:1", "1100"), ("b6:1", "000000"), ("b:1", ""), ("abs", "()")])
def test_single_token(spec, expected):
    g = DepGraph.from_arcs(1, [])
    seq = encode(g, spec)
    assert seq.structural == (expected,)
    assert decode(seq, spec, strict=True) == g


def test_single_token_with_root():
    spec = "b6:2"
    g = DepGraph.from_arcs(1, [Arc(0, 1, "root")])
    seq = encode(g, spec)
    assert seq.roots == ("root",)
    assert seq.relations == (("NULL",),)
    assert decode(seq, spec, strict=True) == g


def test_root_arcs_round_trip():
    g = DepGraph.from_arcs(4, [Arc(0, 2, "root"), Arc(2, 1, "ARG1"), Arc(2, 4, "ARG2"), Arc(0, 3, "root"), Arc(4, 3, "mod")])
    for spec in ALL_SPECS:
        seq = encode(g, spec)
        if seq.coverage.lossless:
            assert decode(seq, spec, strict=True) == g, spec
    assert encode(g, "abs").structural == ("(2)", "(0)", "(0,4)", "(2)")


#
# properties
#


@given(graphs(), st.sampled_from(ALL_SPECS))
def test_lossless_encodings_decode_exactly(g, spec):
    seq = encode(g, spec)
    assert seq.n == g.n
    assert seq.coverage.total_arcs == len(g.arcs)
    report = repair_report(seq, spec)
    assert report.well_formed, report.repairs
    decoded = decode(seq, spec, strict=True)
    if seq.coverage.lossless:
        assert decoded.labeled() == g.labeled()
    else:
        assert decoded.labeled() < g.labeled()
        assert len(g.arcs) - len(decoded.arcs) == seq.coverage.dropped_arcs


@given(graphs(roots=False))
def test_positional_families_are_total(g):
    for spec in ("abs", "rel"):
        assert decode(encode(g, spec), spec).labeled() == g.labeled()


@given(graphs(), st.integers(1, 3))
def test_coverage_classes(g, k):
    if not greedy_assign(g.structural_arcs, k).overflow:
        assert encode(g, f"b:{k}").coverage.lossless


@given(graphs(), st.integers(1, 3))
def test_coverage_lattice(g, k):
    def exact(spec):
        return decode(encode(g, spec), spec).labeled() == g.labeled()

    if exact(f"b4:{k}"):
        assert exact(f"b6:{k}")
    if exact(f"b6:{k}"):
        assert exact(f"b:{k}")


@given(graphs(), st.sampled_from(["b", "b4", "b6"]))
def test_dropped_arcs_shrink_with_k(g, family):
    dropped = [encode(g, f"{family}:{k}").coverage.dropped_arcs for k in (1, 2, 3, 4)]
    assert dropped == sorted(dropped, reverse=True)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("rightward", [True, False])
def test_b6_overflows_past_k_shared_heads(k, rightward):
    # k+1 same-direction heads onto one dependent need k+1 pairs
    if rightward:
        arcs = [Arc(h, k + 2, f"r{h}") for h in range(1, k + 2)]
    else:
        arcs = [Arc(h, 1, f"r{h}") for h in range(2, k + 3)]
    g = DepGraph.from_arcs(k + 2, arcs)
    seq = encode(g, f"b6:{k}")
    assert seq.coverage.dropped_arcs == 1
    decoded = decode(seq, f"b6:{k}", strict=True)
    assert len(g.labeled() - decoded.labeled()) == 1
    assert decoded.labeled() < g.labeled()
    assert encode(g, f"b6:{k + 1}").coverage.lossless


@given(projective_trees())
def test_trees_need_one_group(tree):
    for spec in ("b:1", "b4:1", "b6:1"):
        seq = encode(tree, spec)
        assert seq.coverage.lossless
        assert decode(seq, spec, strict=True) == tree
    # later 4k groups only carry the null-arc chain
    seq = encode(tree, "b4:3")
    for i, label in enumerate(seq.structural, start=1):
        tail = "1101" if i < tree.n else "1100"
        assert label[4:] == tail * 2


#
# ill-formed input
#


def test_bracket_empty_stack():
    seq = labels([">"], [()])
    report = repair_report(seq, "b:1")
    assert not report.well_formed
    assert [r.kind for r in report.repairs] == [RepairKind.EMPTY_STACK]
    assert decode(seq, "b:1").arcs == ()
    with pytest.raises(IllFormedError) as info:
        decode(seq, "b:1", strict=True)
    assert info.value.repairs == report.repairs


def test_bracket_unmatched_opener():
    report = repair_report(labels(["/", ""]), "b:1")
    assert [(r.kind, r.token) for r in report.repairs] == [(RepairKind.UNMATCHED, 1)]


def test_positional_out_of_range_and_self_loop():
    seq = labels(["(9)", "()", "(3)", "()"], [("dep",), (), ("dep",), ()])
    report = repair_report(seq, "abs")
    assert sorted(r.kind for r in report.repairs) == sorted([RepairKind.OUT_OF_RANGE, RepairKind.SELF_LOOP])
    assert decode(seq, "abs").arcs == ()
    assert repair_report(labels(["()"] * 4), "abs").well_formed


def test_bits4_empty_stack():
    seq = labels(["1100", "1100"], [("NULL",), ()])
    report = repair_report(seq, "b4:1")
    assert [(r.kind, r.token) for r in report.repairs] == [(RepairKind.EMPTY_STACK, 2)]


def test_bits6_orphan_flag():
    report = repair_report(labels(["000000", "010000"]), "b6:1")
    assert RepairKind.ORPHAN_FLAG in {r.kind for r in report.repairs}


def test_relation_count_mismatch():
    seq = labels(["(2)", "()"], [("ARG1", "ARG2"), ()])
    g, repairs = get_encoding(EncodingSpec.parse("abs")).audit(seq)
    assert [r.kind for r in repairs] == [RepairKind.RELATION_MISMATCH]
    assert g.labeled() == {(2, 1, "ARG1")}


def test_duplicate_arcs_are_merged():
    seq = labels(["(2,2)", "()"], [("ARG1", "ARG2"), ()])
    g, repairs = get_encoding(EncodingSpec.parse("abs")).audit(seq)
    assert [r.kind for r in repairs] == [RepairKind.DUPLICATE]
    assert len(g.arcs) == 1


@pytest.mark.parametrize(
    "spec,label",
    [
        ("b4:1", "110"),
        ("b4:1", "11a0"),
        ("b6:1", "1100"),
        ("b:1", "x"),
        ("b:1", "/*"),
        ("abs", "(1,)"),
        ("rel", "1"),
    ],
)
def test_grammar_errors(spec, label):
    with pytest.raises(LabelGrammarError):
        decode(labels([label]), spec)


@given(st.integers(0, 2**32 - 1), st.sampled_from(ALL_SPECS), st.integers(1, 9))
def test_decoding_is_total(seed, spec, n):
    seq = random_labels(np.random.default_rng(seed), EncodingSpec.parse(spec), n)
    g, repairs = get_encoding(EncodingSpec.parse(spec)).audit(seq)
    assert g.n == n
    if repairs:
        with pytest.raises(IllFormedError):
            decode(seq, spec, strict=True)
    else:
        assert decode(seq, spec, strict=True) == g
