"""Hand-built instances shared by several test modules."""

from ettlab.coloring import EdgeColoring
from ettlab.multigraph import Multigraph, fat_cycle

# A closed elementary triangle {0,1,2} (missing 0..4 between them) whose only
# boundary color 5 leaves three times; the first connecting edge reaches 3,
# after which 4 and 5 join through edges colored 0 and 1.  Not critical, so it
# exercises ladders and split tails without any elementarity promise.
LADDER_GRAPH = Multigraph(6, [(0, 1), (0, 2), (0, 2), (0, 1), (0, 3), (1, 2), (1, 2), (1, 4), (2, 5),
                              (3, 4), (3, 5)])
LADDER_COLORS = [None, 2, 3, 4, 5, 0, 1, 5, 5, 0, 1]


def ladder():
    return LADDER_GRAPH, EdgeColoring(LADDER_GRAPH, 6, LADDER_COLORS), 0


FC7 = fat_cycle(7, [2, 1, 2, 1, 2, 1, 2])


def flower_snark(n):
    """Cubic class-2 graph on 4n vertices (n odd)."""
    a, b, c, d = (lambda i: 4 * (i % n)), (lambda i: 4 * (i % n) + 1), (lambda i: 4 * (i % n) + 2), (lambda i: 4 * (i % n) + 3)
    edges = []
    for i in range(n):
        edges += [(a(i), b(i)), (a(i), c(i)), (a(i), d(i)), (b(i), b(i + 1))]
    cyc = [c(i) for i in range(n)] + [d(i) for i in range(n)]
    edges += [(cyc[j], cyc[(j + 1) % (2 * n)]) for j in range(2 * n)]
    return Multigraph(4 * n, edges)
