"""An extended Tashkinov tree with one rung, its split tail, and a stability probe.

The instance is small and not critical; it is built so that the closed
triangle {0, 1, 2} has color 5 leaving it three times.
"""

from ettlab import (EdgeColoring, Multigraph, build_ett, exact_chromatic_index, build_split_tail, is_stable, kempe_chain_at,
                    measure_sett, switch_chain, verify_r1, verify_r2)

g = Multigraph(6, [(0, 1), (0, 2), (0, 2), (0, 1), (0, 3), (1, 2), (1, 2), (1, 4), (2, 5), (3, 4), (3, 5)])
c = EdgeColoring(g, 6, [None, 2, 3, 4, 5, 0, 1, 5, 5, 0, 1])

ett = build_ett(g, c, 0)
print("sequence:", ett.tree.sequence())
for r in ett.records:
    print(f"rung {r.index}: edge {r.edge}, delta={r.delta}, gamma={r.gamma}, after {r.prefix} vertices")
print("R1:", bool(verify_r1(c, ett.tree, ett.records)))

split = build_split_tail(g, c, ett)
print("splitters at", split.split.positions, "reserved", split.split.reserved)
print("R2:", bool(verify_r2(g, c, split)))

# recoloring the (delta, gamma) chain through the connecting edge breaks stability
chain = kempe_chain_at(c, 0, 5, 0)
print("stable under identity:", is_stable(g, c, c, ett).stable)
print("stable after chain switch:", is_stable(g, c, switch_chain(c, chain), ett).stable)

rep = measure_sett(g, c, 0)
for q in rep.inequalities:
    print(f"{q.name}: lhs={q.as_dict()['lhs']} rhs={q.as_dict()['rhs']} holds={q.holds}")
# the report takes chi' = k + 1, which only holds for a genuine k-triple
print(f"report assumes chi' = {rep.chi}; actual chi' = {exact_chromatic_index(g).chi}, so nothing is promised here")
