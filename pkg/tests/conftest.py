import pytest
from hypothesis import settings, strategies as st

from graphlin.graph import Arc, DepGraph
from graphlin.formats import fixture_fig1

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

RELATIONS = ("ARG1", "ARG2", "BV", "mod")


@st.composite
def arcs(draw, max_pos=9):
    head = draw(st.integers(0, max_pos))
    dep = draw(st.integers(1, max_pos).filter(lambda d: d != head))
    return Arc(head, dep, "dep")


@st.composite
def graphs(draw, min_n=1, max_n=8, max_density=1.5, roots=True):
    n = draw(st.integers(min_n, max_n))
    pairs = set()
    if n > 1:
        # offset in 1..n-1 keeps head != dep
        raw = draw(
            st.lists(
                st.tuples(st.integers(1, n), st.integers(1, n - 1)),
                max_size=int(max_density * n),
            )
        )
        pairs = {(h, (h - 1 + off) % n + 1) for h, off in raw}
    root_deps = draw(st.sets(st.integers(1, n), max_size=2)) if roots else set()
    out = [Arc(h, d, draw(st.sampled_from(RELATIONS))) for h, d in sorted(pairs)]
    out += [Arc(0, d, "root") for d in sorted(root_deps)]
    return DepGraph.from_arcs(n, out)


def projective_trees(max_n=12):
    from graphlin.synth import random_projective_tree
    import numpy as np

    return st.tuples(st.integers(1, max_n), st.integers(0, 2**32 - 1)).map(
        lambda t: random_projective_tree(np.random.default_rng(t[1]), t[0])
    )


@pytest.fixture
def fig1():
    return fixture_fig1()
