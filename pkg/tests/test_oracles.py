import itertools

import pytest
from hypothesis import given, settings

from ettlab.coloring import EdgeColoring, PreconditionError, validate_proper
from ettlab.multigraph import Multigraph, fat_cycle, fat_triangle
from ettlab.oracles import (SearchTimeout, chromatic_index, class_cover, critical_core, criticality_check,
                            density, density_value, exact_chromatic_index, find_coloring, make_k_triple,
                            near_perfect_decomposition)

from .conftest import multigraphs
from .fixtures import flower_snark


def brute_density(g):
    best = 0
    for r in range(2, g.n + 1):
        for H in itertools.combinations(range(g.n), r):
            hs = set(H)
            e = sum(1 for u, v in g.edges if u in hs and v in hs)
            best = max(best, -(-e // (r // 2)))
    return best


def brute_chi(g):
    """Smallest k with a proper assignment, by trying every assignment."""
    for k in range(1, g.m + 1):
        for cols in itertools.product(range(k), repeat=g.m):
            if all(cols[i] != cols[j] for i in range(g.m) for j in range(i + 1, g.m)
                   if set(g.edges[i]) & set(g.edges[j])):
                return k
    return 0


def test_density_examples(k2, ft2):
    assert density(k2)[0] == 1
    val, wit = density(ft2)
    assert val == 6 and wit.vertices == (0, 1, 2)
    assert density(fat_cycle(5, [1] * 5))[0] == 3


def test_chi_examples(k2, ft2, petersen):
    assert chromatic_index(k2) == 1
    res = exact_chromatic_index(ft2)
    assert res.chi == 6 and validate_proper(ft2, res.coloring).ok
    assert chromatic_index(petersen) == 4


def test_timeout_is_an_outcome():
    g = flower_snark(7)
    with pytest.raises(SearchTimeout):
        find_coloring(g, 3, timeout=0.0)
    assert find_coloring(g, 3) is None


@given(multigraphs(n_max=5, mu_max=2))
@settings(max_examples=40)
def test_density_matches_brute_force(g):
    val, wit = density(g)
    assert val == brute_density(g)
    assert density_value(g, wit.vertices)[0] == val


@given(multigraphs(n_max=4, mu_max=2).filter(lambda g: g.m <= 6))
@settings(max_examples=30)
def test_chi_matches_exhaustive_assignment(g):
    assert chromatic_index(g) == brute_chi(g)


@given(multigraphs(n_max=6, mu_max=3))
def test_sandwich_and_witness(g):
    res = exact_chromatic_index(g)
    delta, mu = g.max_degree(), g.max_multiplicity()
    assert res.omega <= res.chi <= delta + mu and res.chi >= delta
    assert validate_proper(g, res.coloring).ok and res.coloring.k == res.chi


def test_criticality_examples(k2, ft2, triangle):
    rep = criticality_check(ft2, 5)
    assert rep.is_critical and rep.per_edge_chi == (5,) * 6
    assert not criticality_check(k2, 0).is_critical
    assert criticality_check(triangle, 2).is_critical


def test_k_triple_gates(ft2, triangle):
    for e in range(ft2.m):
        c = make_k_triple(ft2, e, 5)
        assert c.colors[e] is None and c.uncolored_edges() == [e]
        assert validate_proper(ft2, c).ok
    with pytest.raises(PreconditionError):
        make_k_triple(ft2, 0, 4)
    with pytest.raises(PreconditionError):
        make_k_triple(triangle, 0, 2)


def test_k_triple_seeds_are_reproducible(ft2):
    assert make_k_triple(ft2, 1, 5, seed=9) == make_k_triple(ft2, 1, 5, seed=9)


def test_critical_core():
    g = fat_cycle(5, [3] * 5)
    core = critical_core(g)
    assert core.chi == 8 and core.graph.m == 15
    extra = Multigraph(7, list(fat_triangle(2).edges) + [(2, 3), (3, 4), (4, 5), (5, 6)])
    core = critical_core(extra)
    assert core.chi == 6 and core.graph.m == 6 and criticality_check(core.graph, 5).is_critical


@pytest.mark.parametrize("t, k", [(2, 5), (3, 8)])
def test_near_perfect_fat_triangles(t, k):
    g = fat_triangle(t)
    for e in range(g.m):
        res = near_perfect_decomposition(g, e)
        assert res.found and len(res.classes) == k
        for cls in res.classes:
            assert len(class_cover(g, cls)) == g.n - 1


def test_near_perfect_rejects_even_order(petersen):
    with pytest.raises(PreconditionError):
        near_perfect_decomposition(petersen, 0, 4)
