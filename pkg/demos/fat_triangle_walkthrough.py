"""Walk through the fat triangle FT(2): density, chromatic index, criticality,
a k-triple, its Tashkinov tree and a near-perfect decomposition."""

from ettlab import (build_maximal_tashkinov, closure_report, criticality_check, density, exact_chromatic_index,
                    fat_triangle, make_k_triple, near_perfect_decomposition)

g = fat_triangle(2)
print(f"FT(2): n={g.n}, m={g.m}, Delta={g.max_degree()}, mu={g.max_multiplicity()}")

omega, witness = density(g)
res = exact_chromatic_index(g)
print(f"omega = {omega} (attained on {witness.vertices}), chi' = {res.chi}")
# chi' = 6 = Delta + mu, two above Delta, and equal to omega as expected

k = res.chi - 1
print("edge-5-critical:", criticality_check(g, k).is_critical)

c = make_k_triple(g, 0, k, seed=1)
for v in range(g.n):
    print(f"  vertex {v} misses {sorted(c.missing(v))}")

T = build_maximal_tashkinov(g, c, 0)
print("Tashkinov tree sequence:", T.sequence())
print("flags:", closure_report(c, T.vertices).as_dict())

npd = near_perfect_decomposition(g, 0)
print("near-perfect classes of E - e:", npd.classes)
