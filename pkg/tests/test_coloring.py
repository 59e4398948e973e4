import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ettlab.coloring import (EdgeColoring, PreconditionError, StaleChainError, boundary, boundary_colors,
                             incident_colors, induced_colors, interchangeable, is_proper, kempe_chain_at,
                             legs_of, missing_colors, switch_chain, switch_outside, validate_proper)
from ettlab.multigraph import Multigraph, fat_cycle
from ettlab.oracles import exact_chromatic_index, find_coloring, make_k_triple

from .conftest import PETERSEN, multigraphs

P3 = Multigraph(3, [(0, 1), (1, 2)])
C4 = Multigraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def test_k2_proper_and_missing(k2):
    c = EdgeColoring(k2, 1, [0])
    assert validate_proper(k2, c).ok
    assert missing_colors(c, 0) == frozenset()
    assert missing_colors(EdgeColoring(k2, 3, [0]), 0) == {1, 2}


def test_conflict_at_middle_vertex():
    rep = validate_proper(P3, EdgeColoring(P3, 2, [0, 0]))
    assert not rep.ok and rep.vertex == 1 and rep.edges == (0, 1)


def test_out_of_range_color():
    rep = validate_proper(P3, EdgeColoring(P3, 2, [0, 5]))
    assert not rep.ok and rep.edges == (1, 1) and "outside" in rep.message


def test_ft2_oracle_coloring_is_proper(ft2):
    res = exact_chromatic_index(ft2)
    assert validate_proper(ft2, res.coloring).ok


def test_ft2_k_triple_missing_counts(ft2):
    c = make_k_triple(ft2, 0, 5)
    a, b = ft2.edges[0]
    other = 3 - a - b
    assert (len(c.missing(a)), len(c.missing(b)), len(c.missing(other))) == (2, 2, 1)


def test_boundary_examples(ft2, petersen):
    a, b = 0, 1
    bd = {x.edge for x in boundary(ft2, {a, b})}
    assert bd == {i for i, e in enumerate(ft2.edges) if 2 in e}
    assert boundary(ft2, range(3)) == []
    spokes = {x.edge for x in boundary(petersen, range(5))}
    assert spokes == {5, 6, 7, 8, 9}


def test_three_color_readings():
    g = Multigraph(3, [(0, 1), (1, 2)])
    c = EdgeColoring(g, 3, [0, 1])
    assert induced_colors(c, {0, 1}) == {0}
    assert boundary_colors(c, {0, 1}) == {1}
    assert incident_colors(c, {0, 1}) == {0, 1}


def test_chain_shapes():
    c = EdgeColoring(P3, 2, [0, 1])
    ch = kempe_chain_at(c, 0, 0, 1)
    assert ch.kind == "path" and set(ch.vertices) == {0, 1, 2}
    assert switch_chain(c, ch).colors == (1, 0)
    c4 = EdgeColoring(C4, 2, [0, 1, 0, 1])
    ch = kempe_chain_at(c4, 2, 0, 1)
    assert ch.kind == "cycle" and len(ch) == 4
    c3 = EdgeColoring(P3, 4, [0, 1])
    lone = kempe_chain_at(c3, 0, 2, 3)
    assert lone.edges == () and switch_chain(c3, lone) == c3


def test_stale_chain_detected():
    c = EdgeColoring(P3, 3, [0, 1])
    ch = kempe_chain_at(c, 0, 0, 1)
    with pytest.raises(StaleChainError):
        switch_chain(c.recolored({1: 2}), ch)


def test_switch_outside_examples(ft2):
    c = make_k_triple(ft2, 0, 5)
    assert switch_outside(c, range(3), 0, 1) == c
    with pytest.raises(PreconditionError):
        switch_outside(c, range(3), 2, 2)
    # both colors absent from the boundary of {0, 1}
    inside = {0, 1}
    bcols = boundary_colors(c, inside)
    free = [x for x in range(5) if x not in bcols]
    if len(free) >= 2:
        d = switch_outside(c, inside, free[0], free[1])
        assert is_proper(ft2, d)


def test_legs_trivial(ft2):
    c = make_k_triple(ft2, 0, 5)
    assert legs_of(c, range(3), 0, 1) == [] and interchangeable(c, range(3), 0, 1)


def test_single_leg_fixture():
    # 0-1-2-3 path, H = {0, 1}; colors 0,1,0 so the (0,1) chain leaves H once and stops at 3
    g = Multigraph(4, [(0, 1), (1, 2), (2, 3)])
    c = EdgeColoring(g, 3, [0, 1, 0])
    legs = legs_of(c, {0, 1}, 0, 1)
    assert len(legs) == 1 and legs[0].exit == 1 and legs[0].far_end == 3


def _random_coloring(g, seed):
    k = g.max_degree() + g.max_multiplicity()
    colors = find_coloring(g, k, seed=seed)
    return EdgeColoring(g, k, colors)


@given(multigraphs(n_max=6), st.integers(0, 10 ** 6), st.data())
def test_kempe_switch_properties(g, seed, data):
    c = _random_coloring(g, seed)
    v = data.draw(st.integers(0, g.n - 1))
    a = data.draw(st.integers(0, c.k - 1))
    b = data.draw(st.integers(0, c.k - 1).filter(lambda x: x != a))
    ch = kempe_chain_at(c, v, a, b)
    d = switch_chain(c, ch)
    assert validate_proper(g, d).ok
    assert switch_chain(d, kempe_chain_at(d, v, a, b)) == c
    changed = {i for i in range(g.m) if c.colors[i] != d.colors[i]}
    assert changed == set(ch.edges)
    w = data.draw(st.integers(0, g.n - 1))
    other = kempe_chain_at(c, w, a, b)
    same = set(other.edges) == set(ch.edges) and set(other.vertices) == set(ch.vertices)
    assert same or not set(other.vertices) & set(ch.vertices)


@given(multigraphs(n_max=6), st.integers(0, 10 ** 6))
def test_missing_size_matches_degree(g, seed):
    c = _random_coloring(g, seed)
    for v in range(g.n):
        assert len(c.missing(v)) == c.k - g.degree(v)
        assert c.missing(v) | c.present_colors(v) == set(range(c.k))


@given(multigraphs(n_min=3, n_max=6), st.integers(0, 10 ** 6), st.data())
def test_boundary_parity_of_colors_present_throughout(g, seed, data):
    # a color present at every vertex of H crosses the boundary |H| times mod 2
    c = _random_coloring(g, seed)
    H = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n))
    miss = missing_colors(c, H)
    for b in range(c.k):
        if b in miss:
            continue
        count = sum(1 for x in boundary(g, H) if c.colors[x.edge] == b)
        assert count % 2 == len(H) % 2
