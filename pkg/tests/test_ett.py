from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ettlab import verify
from ettlab.coloring import EdgeColoring, boundary_colors, colors_of, switch_chain, kempe_chain_at, switch_outside
from ettlab.ett import (ETT, ETTPolicy, NonElementaryError, NotClosedError, ReservedSetInfeasible, SplitTail,
                        build_ett, build_split_tail, find_connecting_edges, is_stable, measure_sett, mp_search,
                        sett_report, tail_growth_bound, verify_r1, verify_r2)
from ettlab.multigraph import Multigraph
from ettlab.oracles import critical_core, exact_chromatic_index, make_k_triple
from ettlab.tashkinov import TreeSeq, build_maximal_tashkinov, missing_in, tree_color_mask, verify_elementary

from .conftest import multigraphs
from .fixtures import FC7, ladder


@pytest.fixture
def lad():
    g, c, e = ladder()
    return g, c, e, build_ett(g, c, e)


def test_ladder_shape(lad):
    g, c, e, ett = lad
    assert ett.rungs == 1 and ett.ladder.positions == (3,)
    r = ett.records[0]
    assert (r.edge, r.delta, r.gamma, r.source, r.path) == (4, 5, 0, 0, (4,))
    assert set(ett.tree.vertices) == set(range(6))
    assert verify_r1(c, ett.tree, ett.records)
    assert verify.check_ett_definition(g, c, ett.tree, ett.records)


def test_ladder_is_deterministic(lad):
    g, c, e, ett = lad
    assert build_ett(g, c, e) == ett
    assert ETT.from_dict(ett.as_dict()) == ett


def test_r1_mutation_is_caught(lad):
    g, c, e, ett = lad
    used = sorted(colors_of(tree_color_mask(c, ett.rung(1))))
    bad = (replace(ett.records[0], gamma=used[0]),)
    res = verify_r1(c, ett.tree, bad)
    assert not res and res.witness == (1,)
    bad = (replace(ett.records[0], gamma=5),)
    assert not verify_r1(c, ett.tree, bad)


def test_split_tail_on_ladder(lad):
    g, c, e, ett = lad
    st_ = build_split_tail(g, c, ett)
    assert st_.split.positions == (3, 4)
    assert st_.split.reserved == ({5: (0, 1)}, {5: (2, 3)})
    assert verify_r2(g, c, st_)
    assert len(st_.tree) >= len(st_.rung(st_.rungs)) + 2
    assert verify.check_ett_definition(g, c, st_.tree, st_.records)
    assert ETT.from_dict(st_.as_dict()) == st_


def test_r2_mutations_are_caught(lad):
    g, c, e, ett = lad
    st_ = build_split_tail(g, c, ett)
    assert not verify_r2(g, c, st_, SplitTail((2, 4), st_.split.reserved))
    assert verify_r2(g, c, st_, None) and not verify_r2(g, c, replace(st_, split=None))
    # a reserved color used at the first stage breaks clause (1)
    res = verify_r2(g, c, st_, SplitTail(st_.split.positions, ({5: (2, 3)}, {5: (2, 3)})))
    assert not res


def test_ladder_stability(lad):
    g, c, e, ett = lad
    assert is_stable(g, c, c, ett).stable
    # flipping the (delta, gamma) chain through the connecting edge moves it
    chain = kempe_chain_at(c, 0, 5, 0)
    rep = is_stable(g, c, switch_chain(c, chain), ett)
    assert not rep.stable


def test_not_closed_and_non_elementary_guards():
    g = Multigraph(3, [(0, 1), (1, 2)])
    c = EdgeColoring(g, 3, [None, 1])
    with pytest.raises(NotClosedError):
        find_connecting_edges(g, c, TreeSeq.start(g, 0))
    g = Multigraph(4, [(0, 1), (0, 2), (0, 2), (1, 3), (1, 3)])
    c = EdgeColoring(g, 4, [None, 0, 1, 0, 1])
    with pytest.raises(NonElementaryError) as info:
        find_connecting_edges(g, c, TreeSeq.start(g, 0))
    assert info.value.witness[2] in (2, 3)


def test_ft2_has_no_rungs(ft2):
    c = make_k_triple(ft2, 0, 5)
    ett = build_ett(ft2, c, 0)
    assert ett.rungs == 0 and len(ett.tree) == 3
    assert verify_r2(ft2, c, ett)
    st_ = build_split_tail(ft2, c, ett)
    assert st_.split == SplitTail((0,), ({},)) and verify_r2(ft2, c, st_)


def test_mp_search(ft2):
    res = mp_search(ft2, 0, 5, budget=1)
    assert res.ett == build_ett(ft2, res.coloring, 0)
    res = mp_search(ft2, 0, 5, budget=6, seed=3)
    assert res.best_sizes == (3,)
    assert all(a <= b for a, b in zip(res.history, res.history[1:]))
    assert mp_search(ft2, 0, 5, budget=6, seed=3) == res
    with pytest.raises(ValueError):
        mp_search(ft2, 0, 5, budget=0)


def test_fc7_builds_are_elementary_or_flagged():
    # the mixed fat heptagon is not critical: record what each build does
    g = FC7
    assert exact_chromatic_index(g).chi == g.max_degree()
    outcomes = {"ett": 0, "flagged": 0}
    for e in range(g.m):
        for s in range(4):
            c = make_k_triple(g, e, g.max_degree() + 1, seed=s, check=False)
            try:
                ett = build_ett(g, c, e, ETTPolicy(seed=s))
            except NonElementaryError as err:
                a, b, col = err.witness
                assert c.missing_mask(a) >> col & 1 and c.missing_mask(b) >> col & 1
                outcomes["flagged"] += 1
                continue
            assert verify_r1(c, ett.tree, ett.records)
            assert verify.check_ett_definition(g, c, ett.tree, ett.records)
            outcomes["ett"] += 1
    assert outcomes["ett"] > 0


@st.composite
def critical_triples(draw):
    g = draw(multigraphs(n_min=3, n_max=6, mu_max=3))
    res = exact_chromatic_index(g)
    if res.chi < g.max_degree() + 2:
        return None
    core = critical_core(g, res.chi).graph
    e = draw(st.integers(0, core.m - 1))
    c = make_k_triple(core, e, res.chi - 1, seed=draw(st.integers(0, 10 ** 6)), check=False)
    return core, c, e


@given(critical_triples(), st.integers(0, 1000))
@settings(max_examples=30)
def test_ett_and_split_tail_are_elementary(triple, seed):
    if triple is None:
        return
    g, c, e = triple
    ett = build_ett(g, c, e, ETTPolicy(seed=seed))
    assert verify_r1(c, ett.tree, ett.records)
    assert verify_elementary(c, ett.tree.vertices).ok
    st_ = build_split_tail(g, c, ett, seed=seed)
    assert verify_r2(g, c, st_)
    assert verify_elementary(c, st_.tree.vertices).ok


@given(critical_triples(), st.data())
@settings(max_examples=30)
def test_switch_outside_with_non_boundary_colors_is_stable(triple, data):
    if triple is None:
        return
    g, c, e = triple
    ett = build_ett(g, c, e)
    free = sorted(set(range(c.k)) - boundary_colors(c, ett.tree.vertices))
    if len(free) < 2:
        return
    a, b = data.draw(st.sampled_from(free)), data.draw(st.sampled_from(free))
    if a == b:
        return
    c2 = switch_outside(c, ett.tree.vertices, a, b)
    assert is_stable(g, c, c2, ett).stable


def test_growth_bound_spot_check():
    # chi - 1 - Delta = 1, mu = 2, three missing colors: 2 * (3/2)^3
    assert tail_growth_bound(6, 4, 2, 3) == Fraction(27, 4)
    assert float(tail_growth_bound(6, 4, 2, 3)) == 6.75
    assert tail_growth_bound(6, 4, 2, 0) == 2


def test_sett_report_on_ft2(ft2):
    c = make_k_triple(ft2, 0, 5)
    rep = measure_sett(ft2, c, 0)
    assert rep.graph_elementary and not rep.hypothesis_met
    assert rep.ett.rungs == 0 and rep.base_size == 0 and rep.tail_size == 3
    growth = next(q for q in rep.inequalities if q.name == "tail_exponential_growth")
    assert growth.rhs == 2


def test_sett_report_on_ladder(lad):
    g, c, e, _ = lad
    rep = measure_sett(g, c, e)
    assert rep.ett.rungs == 1 and not rep.graph_elementary
    assert rep.base_missing == colors_of(missing_in(c, rep.ett.rung(1).vertices))
    d = rep.as_dict()
    assert [q["name"] for q in d["inequalities"]] == ["missing_on_base_used_in_tail",
                                                     "tail_at_least_twice_base_missing",
                                                     "tail_exponential_growth"]
