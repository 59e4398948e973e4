import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ettlab.coloring import EdgeColoring, PreconditionError, boundary
from ettlab.multigraph import Multigraph, fat_cycle
from ettlab.oracles import critical_core, exact_chromatic_index, make_k_triple
from ettlab.tashkinov import (TreeSeq, build_maximal_tashkinov, closure_report, is_tashkinov_tree,
                              verify_elementary)
from ettlab import verify

from .conftest import multigraphs


def test_ft2_spans_and_is_closed(ft2):
    for e in range(ft2.m):
        c = make_k_triple(ft2, e, 5, seed=e)
        T = build_maximal_tashkinov(ft2, c, e)
        assert len(T) == 3 and closure_report(c, T.vertices).closed
        assert is_tashkinov_tree(ft2, c, T, e)


def test_fat_pentagon_spans():
    g = fat_cycle(5, [2] * 5)
    for e in range(g.m):
        c = make_k_triple(g, e, 5, seed=e, check=False)
        T = build_maximal_tashkinov(g, c, e)
        assert set(T.vertices) == set(range(5))
        assert not boundary(g, T.vertices)


def test_stuck_single_edge():
    # both ends of e miss {2, 3}; the boundary only carries 0 and 1
    g = Multigraph(4, [(0, 1), (0, 2), (0, 2), (1, 3), (1, 3)])
    c = EdgeColoring(g, 4, [None, 0, 1, 0, 1])
    T = build_maximal_tashkinov(g, c, 0)
    assert T.vertices == (0, 1)
    assert not verify_elementary(c, T.vertices).ok


def test_k_triple_preconditions(ft2):
    c = make_k_triple(ft2, 0, 5)
    with pytest.raises(PreconditionError):
        build_maximal_tashkinov(ft2, c, 1)
    low = EdgeColoring(ft2, 4, [None, 0, 1, 2, 3, 0])
    with pytest.raises(PreconditionError):
        build_maximal_tashkinov(ft2, low, 0)


def test_elementary_witness():
    g = Multigraph(3, [(0, 1), (1, 2)])
    c = EdgeColoring(g, 4, [0, 1])
    flag = verify_elementary(c, [0, 2])
    assert not flag.ok and flag.witness == (0, 2, 2)
    assert verify_elementary(c, [1]).ok


def test_closure_witness_and_whole_graph(ft2):
    g = Multigraph(3, [(0, 1), (1, 2)])
    c = EdgeColoring(g, 3, [None, 1])
    rep = closure_report(c, [0, 1])
    assert not rep.closed and rep.closed_witness == 1
    full = closure_report(make_k_triple(ft2, 0, 5), range(3))
    assert full.closed and full.strongly_closed


def test_b_closure_flags():
    g = Multigraph(4, [(0, 1), (1, 2), (0, 3)])
    c = EdgeColoring(g, 4, [None, 2, 3])
    rep = closure_report(c, [0, 1], B=[3])
    assert rep.b_closed is False
    assert rep.b_minus_closed is False
    rep = closure_report(c, [0, 1], B=[2, 3])
    assert rep.b_minus_closed is True


def test_sequence_roundtrip():
    T = TreeSeq((0, 1, 2), (0, 4))
    assert TreeSeq.from_sequence(T.sequence()) == T
    assert T.prefix(2) == TreeSeq((0, 1), (0,))


@st.composite
def k_triples(draw):
    g = draw(multigraphs(n_min=3, n_max=6, mu_max=3))
    res = exact_chromatic_index(g)
    if res.chi < g.max_degree() + 2:
        return None
    core = critical_core(g, res.chi).graph
    e = draw(st.integers(0, core.m - 1))
    c = make_k_triple(core, e, res.chi - 1, seed=draw(st.integers(0, 10 ** 6)), check=False)
    return core, c, e


@given(k_triples(), st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_every_taa_order_gives_elementary_closed_odd_tree(triple, order_seed):
    if triple is None:
        return
    g, c, e = triple
    T = build_maximal_tashkinov(g, c, e, seed=order_seed)
    assert verify.check_elementary(g, c.colors, c.k, T.vertices)
    assert verify.check_closed(g, c.colors, c.k, T.vertices)
    assert len(T) % 2 == 1
    assert verify.check_tashkinov(g, c.colors, c.k, T.vertices, T.edges)
    base = build_maximal_tashkinov(g, c, e)
    assert set(base.vertices) == set(T.vertices)
