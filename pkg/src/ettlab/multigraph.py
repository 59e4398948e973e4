"""Loopless multigraphs: storage, statistics, text format and generators.

Vertices are ``0..n-1`` and edges are dense ids ``0..m-1``.  Graphs are
immutable after construction; everything that "modifies" a graph returns a
new one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np


class GraphFormatError(ValueError):
    """Malformed graph text.  ``line`` is 1-based, or None for whole-file errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class LoopError(GraphFormatError):
    pass


@dataclass(frozen=True)
class GraphStats:
    max_degree: int
    multiplicity: int
    n: int
    m: int

    def as_dict(self) -> dict:
        return {"max_degree": self.max_degree, "multiplicity": self.multiplicity,
                "n": self.n, "m": self.m}


class Multigraph:
    """Loopless multigraph with parallel edges.

    ``edges[i]`` is the endpoint pair of edge ``i``.  ``incident[v]`` lists
    edge ids at ``v`` in increasing order.
    """

    __slots__ = ("n", "edges", "incident", "_mult", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        pairs = tuple((int(u), int(v)) for u, v in edges)
        incident: list[list[int]] = [[] for _ in range(n)]
        mult: dict[tuple[int, int], int] = {}
        for i, (u, v) in enumerate(pairs):
            if u == v:
                raise LoopError(f"edge {i} is a loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {i} = ({u}, {v}) has an endpoint outside 0..{n - 1}")
            incident[u].append(i)
            incident[v].append(i)
            key = (u, v) if u < v else (v, u)
            mult[key] = mult.get(key, 0) + 1
        self.n = n
        self.edges = pairs
        self.incident = tuple(tuple(x) for x in incident)
        self._mult = mult
        self._hash = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def __eq__(self, other):
        return isinstance(other, Multigraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __repr__(self):
        return f"Multigraph(n={self.n}, m={self.m})"

    def degree(self, v: int) -> int:
        return len(self.incident[v])

    def multiplicity(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        return self._mult.get(key, 0)

    def pair_multiplicities(self) -> dict[tuple[int, int], int]:
        """Map ``(u, v)`` with ``u < v`` to the number of parallel edges."""
        return dict(self._mult)

    def other_end(self, edge: int, v: int) -> int:
        a, b = self.edges[edge]
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError(f"vertex {v} is not an end of edge {edge}")

    def neighbors(self, v: int) -> list[int]:
        return sorted({self.other_end(f, v) for f in self.incident[v]})

    def max_degree(self) -> int:
        return max((len(x) for x in self.incident), default=0)

    def max_multiplicity(self) -> int:
        return max(self._mult.values(), default=0)

    def stats(self) -> GraphStats:
        return GraphStats(self.max_degree(), self.max_multiplicity(), self.n, self.m)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for f in self.incident[v]:
                w = self.other_end(f, v)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def delete_edges(self, removed: Iterable[int]) -> "Multigraph":
        """Drop edges; surviving edges are renumbered densely in their old order."""
        gone = set(removed)
        return Multigraph(self.n, [p for i, p in enumerate(self.edges) if i not in gone])

    def without_isolated(self) -> tuple["Multigraph", list[int]]:
        """Remove isolated vertices.  Returns the graph and old ids of kept vertices."""
        keep = [v for v in range(self.n) if self.incident[v]]
        index = {v: i for i, v in enumerate(keep)}
        return Multigraph(len(keep), [(index[u], index[v]) for u, v in self.edges]), keep

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for (u, v), t in self._mult.items():
            a[u, v] = a[v, u] = t
        return a


def stats(g: Multigraph) -> GraphStats:
    return g.stats()


# ---------------------------------------------------------------------------
# text format

def parse_graph(source: str) -> Multigraph:
    """Parse one graph in the ``multigraph <n>`` / ``e <u> <v>`` format."""
    n = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "multigraph" or len(parts) != 2:
                raise GraphFormatError("expected header 'multigraph <n>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n < 0:
                raise GraphFormatError("vertex count must be non-negative", lineno)
            continue
        if parts[0] != "e" or len(parts) != 3:
            raise GraphFormatError(f"expected 'e <u> <v>', got {line!r}", lineno)
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphFormatError(f"bad endpoint in {line!r}", lineno) from None
        if u == v:
            raise LoopError(f"loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex index out of range 0..{n - 1} in {line!r}", lineno)
        edges.append((u, v))
    if n is None:
        raise GraphFormatError("missing 'multigraph <n>' header")
    return Multigraph(n, edges)


def parse_graphs(source: str) -> list[Multigraph]:
    """Parse a stream of graphs, each starting with its own header line."""
    chunks: list[list[str]] = []
    for line in source.splitlines():
        if line.strip().startswith("multigraph"):
            chunks.append([])
        if chunks:
            chunks[-1].append(line)
        elif line.strip() and not line.strip().startswith("#"):
            raise GraphFormatError("content before first header", 1)
    return [parse_graph("\n".join(c)) for c in chunks]


def emit_graph(g: Multigraph) -> str:
    order = sorted(range(g.m), key=lambda i: (min(g.edges[i]), max(g.edges[i]), i))
    lines = [f"multigraph {g.n}"]
    lines.extend(f"e {min(g.edges[i])} {max(g.edges[i])}" for i in order)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# canonical forms

@lru_cache(maxsize=None)
def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu, ju = np.triu_indices(n, k=1)
    return iu, ju


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


@lru_cache(maxsize=None)
def _pair_permutations(n: int) -> np.ndarray:
    """For each vertex permutation p, the induced permutation of pair slots.

    Row r maps slot s of the permuted vector to the source slot, so that
    ``w[:, table[r]]`` is the weight vector of the relabelled graph.
    """
    iu, ju = _pair_index(n)
    slot = {(int(a), int(b)): s for s, (a, b) in enumerate(zip(iu, ju))}
    perms = _permutations(n)
    table = np.empty((len(perms), len(iu)), dtype=np.int64)
    for r, p in enumerate(perms):
        for s, (a, b) in enumerate(zip(iu, ju)):
            x, y = int(p[a]), int(p[b])
            table[r, s] = slot[(x, y) if x < y else (y, x)]
    return table


def canonical_form(g: Multigraph) -> tuple[int, tuple[int, ...]]:
    """Lexicographically smallest upper-triangle multiplicity vector over all relabellings."""
    if g.n > 8:
        raise ValueError("brute-force canonization is limited to n <= 8")
    if g.n < 2:
        return (g.n, ())
    a = g.adjacency_matrix()
    iu, ju = _pair_index(g.n)
    w = a[iu, ju]
    rows = w[_pair_permutations(g.n)]
    best = rows[np.lexsort(rows.T[::-1])[0]]
    return (g.n, tuple(int(x) for x in best))


def graph_from_weights(n: int, weights: Sequence[int]) -> Multigraph:
    iu, ju = _pair_index(n)
    edges = []
    for a, b, t in zip(iu, ju, weights):
        edges.extend([(int(a), int(b))] * int(t))
    return Multigraph(n, edges)


def canonical_graph(g: Multigraph) -> Multigraph:
    n, w = canonical_form(g)
    return graph_from_weights(n, w)


# ---------------------------------------------------------------------------
# generators

def fat_cycle(n: int, multiplicities: Sequence[int]) -> Multigraph:
    """Cycle ``0-1-...-(n-1)-0`` where pair ``(i, i+1)`` carries ``multiplicities[i]`` edges."""
    if n < 3:
        raise ValueError("fat cycle needs n >= 3")
    if len(multiplicities) != n or any(t < 1 for t in multiplicities):
        raise ValueError("need one multiplicity >= 1 per cycle pair")
    edges = []
    for i, t in enumerate(multiplicities):
        j = (i + 1) % n
        edges.extend([(min(i, j), max(i, j))] * t)
    return Multigraph(n, edges)


def fat_triangle(t: int) -> Multigraph:
    return fat_cycle(3, [t, t, t])


def random_multigraph(n: int, mu_max: int, edge_budget: int, seed: int) -> Multigraph:
    """Connected random multigraph with exactly ``edge_budget`` edges and multiplicity <= mu_max.

    A random spanning tree is laid down first, the rest is drawn uniformly from
    the pairs that still have room.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if mu_max < 1:
        raise ValueError("mu_max must be >= 1")
    cap = mu_max * n * (n - 1) // 2
    if not (n - 1 <= edge_budget <= cap):
        raise ValueError(f"edge budget must lie in [{n - 1}, {cap}]")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    mult: dict[tuple[int, int], int] = {}
    for i in range(1, n):
        u, v = int(order[i]), int(order[rng.integers(0, i)])
        key = (min(u, v), max(u, v))
        mult[key] = 1
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    for _ in range(edge_budget - (n - 1)):
        room = [p for p in pairs if mult.get(p, 0) < mu_max]
        p = room[int(rng.integers(0, len(room)))]
        mult[p] = mult.get(p, 0) + 1
    edges = []
    for p in pairs:
        edges.extend([p] * mult.get(p, 0))
    return Multigraph(n, edges)


def random_corpus(count: int, n_max: int, mu_max: int, seed: int, n_min: int = 2) -> Iterator[Multigraph]:
    """``count`` connected random multigraphs with order in ``[n_min, n_max]``."""
    if n_min < 2 or n_max < n_min:
        raise ValueError("need 2 <= n_min <= n_max")
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        mu = int(rng.integers(1, mu_max + 1))
        cap = mu * n * (n - 1) // 2
        budget = int(rng.integers(n - 1, cap + 1))
        yield random_multigraph(n, mu, budget, int(rng.integers(0, 2**63 - 1)))


_ENUMERATION_LIMIT = 2_000_000


def enumerate_all(n_max: int, mu_max: int) -> Iterator[Multigraph]:
    """Every connected loopless multigraph with 2 <= n <= n_max and multiplicity <= mu_max,
    one per isomorphism class, ordered by n then by canonical vector.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if n_max > 6:
        raise ValueError("exhaustive enumeration is capped at n <= 6")
    if mu_max < 1:
        raise ValueError("mu_max must be >= 1")
    for n in range(2, n_max + 1):
        slots = n * (n - 1) // 2
        base = mu_max + 1
        if base**slots > _ENUMERATION_LIMIT:
            raise ValueError(f"enumeration of n={n}, mu_max={mu_max} is too large")
        codes = np.arange(base**slots, dtype=np.int64)
        digits = np.empty((len(codes), slots), dtype=np.int64)
        rest = codes.copy()
        for s in range(slots - 1, -1, -1):
            digits[:, s] = rest % base
            rest //= base
        powers = base ** np.arange(slots - 1, -1, -1, dtype=np.int64)
        canon = None
        for row in _pair_permutations(n):
            code = digits[:, row] @ powers
            canon = code if canon is None else np.minimum(canon, code)
        # slot 0 is most significant, so the minimum code is the lexicographic minimum
        for code in np.unique(canon):
            w = [(int(code) // int(p)) % base for p in powers]
            g = graph_from_weights(n, w)
            if g.is_connected():
                yield g
