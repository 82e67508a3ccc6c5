import pytest
from hypothesis import given

from graphlin.graph import Arc, ArcKind, DepGraph
from graphlin.planes import (
    DirectionPairs,
    IncompatibilityRule,
    PlaneAssignment,
    add_null_arcs,
    assign_direction_pairs,
    attach_root_arcs,
    canonical_order,
    greedy_assign,
    null_arc,
    pairs_from_planes,
    planes_from_pairs,
    split_in_degree,
)

from .conftest import graphs, projective_trees
from .oracles import min_planes_bruteforce

SDC = IncompatibilityRule.SAME_DIRECTION_CROSS
SCOSD = IncompatibilityRule.SAME_DIRECTION_CROSS_OR_SHARED_DEPENDENT


def pairs_of(plane):
    return {a.pair for a in plane}


def test_canonical_order():
    arcs = [Arc(5, 6), Arc(6, 3), Arc(1, 5), Arc(2, 1), Arc(3, 5), Arc(1, 4)]
    assert [a.pair for a in canonical_order(arcs)] == [(2, 1), (1, 4), (1, 5), (3, 5), (6, 3), (5, 6)]
    # same span: rightward first
    assert [a.pair for a in canonical_order([Arc(4, 2), Arc(2, 4)])] == [(2, 4), (4, 2)]


def test_rules():
    assert SDC.conflicts(Arc(1, 4), Arc(3, 5))
    assert not SDC.conflicts(Arc(1, 5), Arc(4, 5))
    assert SCOSD.conflicts(Arc(1, 5), Arc(4, 5))
    assert not SCOSD.conflicts(Arc(1, 5), Arc(6, 3))


def test_greedy_fig1(fig1):
    result = greedy_assign(fig1.structural_arcs)
    assert result.used == 2
    assert pairs_of(result.planes[1]) == {(3, 5)}
    assert pairs_of(result.planes[0]) == {(2, 1), (1, 4), (1, 5), (2, 3), (6, 3), (4, 5), (5, 6)}
    assert result.audit() == []
    assert min_planes_bruteforce(fig1.structural_arcs) == 2


def test_greedy_bounded_overflow(fig1):
    result = greedy_assign(fig1.structural_arcs, k_max=1)
    assert result.k == 1
    assert [a.pair for a in result.overflow] == [(3, 5)]
    assert result.regular_overflow == result.overflow


@pytest.mark.parametrize(
    "arcs,used",
    [
        ([], 0),
        ([Arc(1, 2), Arc(2, 3), Arc(3, 4)], 1),
        ([Arc(1, 3), Arc(2, 4)], 2),
        ([Arc(1, 3), Arc(4, 2)], 1),
        ([Arc(1, 4), Arc(2, 5), Arc(3, 6)], 3),
    ],
)
def test_greedy_examples(arcs, used):
    assert greedy_assign(arcs).used == used


@given(graphs(max_n=5, max_density=1.2))
def test_greedy_never_beats_the_minimum(g):
    result = greedy_assign(g.structural_arcs)
    assert result.audit() == []
    assert result.used >= min_planes_bruteforce(g.structural_arcs)


@given(graphs())
def test_bounded_runs_are_prefixes(g):
    unbounded = greedy_assign(g.structural_arcs)
    previous = None
    for k in range(1, 5):
        bounded = greedy_assign(g.structural_arcs, k)
        assert bounded.planes == unbounded.planes[:k]
        if previous is not None:
            assert len(bounded.overflow) <= len(previous.overflow)
            assert set(bounded.overflow) <= set(previous.overflow)
        previous = bounded
    assert sorted(unbounded.arcs()) == sorted(g.structural_arcs)


def test_split_in_degree_fig1(fig1):
    dummy = Arc(0, 2, "NULL", ArcKind.DUMMY)
    result = split_in_degree(list(fig1.structural_arcs) + [dummy], k_max=3)
    assert result.overflow == ()
    assert [pairs_of(p) for p in result.planes] == [
        {(0, 2), (2, 1), (2, 3), (3, 5), (5, 6)},
        {(1, 4), (1, 5), (6, 3)},
        {(4, 5)},
    ]
    assert result.audit() == []


def test_split_in_degree_separates_shared_dependents():
    result = split_in_degree([Arc(1, 5), Arc(3, 5), Arc(4, 5)])
    assert result.used == 3
    assert all(len(p) == 1 for p in result.planes)


@given(graphs())
def test_split_in_degree_planes_have_one_parent(g):
    result = split_in_degree(g.structural_arcs)
    for plane in result.planes:
        deps = [a.dep for a in plane]
        assert len(deps) == len(set(deps))
    assert result.audit() == []
    assert result.audit(SDC) == []


def test_null_arcs():
    assert null_arc(1) == Arc(0, 1, "NULL", ArcKind.NULL)
    plane = (Arc(0, 2, "NULL", ArcKind.DUMMY), Arc(2, 1), Arc(2, 3), Arc(3, 5), Arc(5, 6))
    filled = add_null_arcs(PlaneAssignment(planes=(plane,)), 6)
    added = set(filled.planes[0]) - set(plane)
    assert added == {Arc(3, 4, "NULL", ArcKind.NULL)}

    empty = add_null_arcs(PlaneAssignment(), 3, k=2)
    assert empty.k == 2
    for p in empty.planes:
        assert [a.pair for a in p] == [(0, 1), (1, 2), (2, 3)]


@given(graphs())
def test_null_arcs_keep_planes_valid(g):
    filled = add_null_arcs(split_in_degree(g.structural_arcs), g.n, k=2)
    for plane in filled.planes:
        assert sorted(a.dep for a in plane) == list(range(1, g.n + 1))
    assert filled.audit(SCOSD) == []


def test_direction_pairs_fig1(fig1):
    pairs = assign_direction_pairs(fig1.structural_arcs, 3)
    assert pairs.k == 3
    assert pairs.overflow == ()
    assert pairs_of(pairs.pair(1)[0]) == {(1, 4), (1, 5), (2, 3), (5, 6)}
    assert pairs_of(pairs.pair(1)[1]) == {(2, 1), (6, 3)}
    assert pairs_of(pairs.pair(2)[0]) == {(3, 5)}
    assert pairs_of(pairs.pair(3)[0]) == {(4, 5)}
    assert pairs.pair(2)[1] == () and pairs.pair(3)[1] == ()
    assert pairs.audit() == []


def test_direction_pairs_overflow_and_mixing():
    shared = assign_direction_pairs([Arc(2, 1), Arc(3, 1)], 1)
    assert [a.pair for a in shared.overflow] == [(3, 1)]
    opposite = assign_direction_pairs([Arc(1, 5), Arc(6, 3)], 1)
    assert opposite.overflow == ()
    assert pairs_of(opposite.pair(1)[0]) == {(1, 5)}
    assert pairs_of(opposite.pair(1)[1]) == {(6, 3)}
    with pytest.raises(ValueError):
        DirectionPairs(rightward=((Arc(3, 1),),)).audit()


def test_direction_pairs_ignore_root_arcs():
    pairs = assign_direction_pairs([Arc(0, 2, "root"), Arc(2, 1)], 1)
    assert pairs.pair(1)[0] == ()
    attached = attach_root_arcs(pairs, [Arc(0, 2, "root")])
    assert pairs_of(attached.pair(1)[0]) == {(0, 2)}


@given(projective_trees())
def test_projective_trees_fit_one_plane(tree):
    assert greedy_assign(tree.structural_arcs).used <= 1
    pairs = attach_root_arcs(assign_direction_pairs(tree.structural_arcs, 1), tree.root_arcs)
    assert pairs.overflow == ()
    assert tree.root_arcs[0] in pairs.pair(1)[0]


@given(graphs())
def test_conversions_keep_plane_invariants(g):
    planes = split_in_degree(g.structural_arcs, 2)
    pairs = pairs_from_planes(planes)
    assert pairs.audit() == []
    assert pairs.regular_overflow == planes.regular_overflow
    joined = planes_from_pairs(assign_direction_pairs(g.structural_arcs, 2))
    assert joined.audit() == []
    assert sorted(joined.arcs() + list(joined.overflow)) == sorted(g.structural_arcs)


def test_padding():
    assignment = greedy_assign([Arc(1, 2)], 3).padded(3)
    assert assignment.k == 3 and assignment.used == 1
    assert DirectionPairs().padded(2).k == 2
    assert DepGraph.from_arcs(1, []).structural_arcs == ()
