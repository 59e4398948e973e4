"""Exact ground truth at desk scale: density, chromatic index, criticality, k-triples."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coloring import EdgeColoring, PreconditionError, kempe_chain_at, switch_chain
from .multigraph import Multigraph


class SearchTimeout(Exception):
    """An exact search ran past its deadline."""


class NotColorableError(RuntimeError):
    pass


@dataclass(frozen=True)
class DensityWitness:
    vertices: tuple[int, ...]
    value: int
    edge_count: int


def density_value(g: Multigraph, H: Sequence[int]) -> tuple[int, int]:
    """``(ceil(|E(H)| / floor(|H|/2)), |E(H)|)`` for the subgraph induced by ``H``."""
    hs = set(H)
    if len(hs) < 2:
        raise ValueError("density needs at least two vertices")
    edges = sum(1 for u, v in g.edges if u in hs and v in hs)
    half = len(hs) // 2
    return -(-edges // half), edges


def density(g: Multigraph, timeout: float | None = None) -> tuple[int, DensityWitness]:
    """Exact omega with the lexicographically smallest maximizing vertex set.

    Above 16 vertices the odd sets are enumerated one by one, which is
    exponential; ``timeout`` (seconds) bounds that enumeration.
    """
    if g.n < 2:
        raise ValueError("density needs n >= 2")
    if g.n <= 16:
        return _density_all_subsets(g)
    deadline = None if timeout is None else time.monotonic() + timeout
    return _density_odd_subsets(g, deadline)


def _density_all_subsets(g: Multigraph) -> tuple[int, DensityWitness]:
    n = g.n
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n, dtype=np.int64)) & 1
    sizes = bits.sum(axis=1)
    counts = np.zeros(len(masks), dtype=np.int64)
    for (u, v), t in g.pair_multiplicities().items():
        counts += t * (bits[:, u] & bits[:, v])
    half = sizes // 2
    ok = sizes >= 2
    vals = np.full(len(masks), -1, dtype=np.int64)
    vals[ok] = -(-counts[ok] // half[ok])
    best = int(vals.max())
    ties = np.nonzero(vals == best)[0]
    sets = [tuple(int(i) for i in np.nonzero(bits[t])[0]) for t in ties]
    chosen = min(sets)
    return best, DensityWitness(chosen, best, int(counts[sum(1 << v for v in chosen)]))


def _density_odd_subsets(g: Multigraph, deadline: float | None = None) -> tuple[int, DensityWitness]:
    # the maximum is attained on a pair or on an odd set
    n = g.n
    mult = g.pair_multiplicities()
    best_pair = min(mult, key=lambda p: (-mult[p], p)) if mult else (0, 1)
    best = mult.get(best_pair, 0)
    witness = DensityWitness(best_pair, best, best)
    degrees = sorted((g.degree(v) for v in range(n)), reverse=True)
    for size in range(3, n + 1, 2):
        ub_edges = sum(degrees[:size]) // 2
        if -(-ub_edges // (size // 2)) <= best:
            continue
        for count, H in enumerate(itertools.combinations(range(n), size)):
            if deadline is not None and count % 4096 == 0 and time.monotonic() > deadline:
                raise SearchTimeout()
            val, edges = density_value(g, H)
            if val > best:
                best, witness = val, DensityWitness(H, val, edges)
    return best, witness


# ---------------------------------------------------------------------------
# exact edge colouring

def _popcount(x: int) -> int:
    return bin(x).count("1")


class _Search:
    """Branch and bound over parallel classes.

    A parallel class (all edges between one vertex pair) receives its whole
    color set in one branching step, which removes the symmetry between
    parallel edges.  Colors never used so far are interchangeable, so only the
    smallest unused ones are offered.
    """

    def __init__(self, g: Multigraph, k: int, deadline: float | None, rng: np.random.Generator | None):
        self.g = g
        self.k = k
        self.full = (1 << k) - 1
        self.deadline = deadline
        self.rng = rng
        groups: dict[tuple[int, int], list[int]] = {}
        for i, (u, v) in enumerate(g.edges):
            groups.setdefault((min(u, v), max(u, v)), []).append(i)
        self.classes = [(u, v, ids) for (u, v), ids in sorted(groups.items())]
        self.at: list[list[int]] = [[] for _ in range(g.n)]
        for ci, (u, v, _) in enumerate(self.classes):
            self.at[u].append(ci)
            self.at[v].append(ci)
        self.used = [0] * g.n
        self.unc = [g.degree(v) for v in range(g.n)]
        self.done = [False] * len(self.classes)
        self.assigned: list[tuple[int, ...] | None] = [None] * len(self.classes)
        self.global_used = 0
        self.remaining = g.m
        self.nodes = 0

    def run(self) -> list[int] | None:
        if self.g.m == 0:
            return []
        if self.k < self.g.max_degree() or self.k < self.g.max_multiplicity():
            return None
        if not self._solve():
            return None
        colors = [0] * self.g.m
        for (u, v, ids), cols in zip(self.classes, self.assigned):
            for i, c in zip(ids, cols):
                colors[i] = c
        return colors

    def _feasible(self) -> bool:
        if self.remaining == 0:
            return True
        reach = [0] * self.g.n
        for ci, (u, v, ids) in enumerate(self.classes):
            if self.done[ci]:
                continue
            avail = self.full & ~(self.used[u] | self.used[v])
            if _popcount(avail) < len(ids):
                return False
            reach[u] |= avail
            reach[v] |= avail
        for v in range(self.g.n):
            if self.unc[v] and _popcount(reach[v]) < self.unc[v]:
                return False
        # each color class can still absorb at most floor(|W_c|/2) edges
        capacity = 0
        for c in range(self.k):
            bit = 1 << c
            w = sum(1 for v in range(self.g.n) if reach[v] & bit)
            capacity += w // 2
            if capacity >= self.remaining:
                return True
        return capacity >= self.remaining

    def _pick(self) -> int:
        best = None
        best_key = None
        for ci, (u, v, ids) in enumerate(self.classes):
            if self.done[ci]:
                continue
            avail = self.full & ~(self.used[u] | self.used[v])
            slack = _popcount(avail) - len(ids)
            key = (slack, -(self.unc[u] + self.unc[v]), -len(ids))
            if self.rng is not None:
                key = key + (float(self.rng.random()),)
            if best_key is None or key < best_key:
                best, best_key = ci, key
        return best

    def _options(self, ci: int):
        u, v, ids = self.classes[ci]
        t = len(ids)
        avail = self.full & ~(self.used[u] | self.used[v])
        old = [c for c in range(self.k) if (avail & self.global_used) >> c & 1]
        nxt = self.global_used.bit_length()
        fresh = list(range(nxt, min(self.k, nxt + t)))
        if self.rng is not None:
            self.rng.shuffle(old)
        pool = old + fresh
        nf = len(fresh)
        for combo in itertools.combinations(range(len(pool)), t):
            taken_fresh = [i - len(old) for i in combo if i >= len(old)]
            # fresh colors must be used as a prefix
            if taken_fresh != list(range(len(taken_fresh))):
                continue
            if len(taken_fresh) > nf:
                continue
            yield tuple(pool[i] for i in combo)

    def _solve(self) -> bool:
        self.nodes += 1
        if self.deadline is not None and self.nodes % 512 == 0 and time.monotonic() > self.deadline:
            raise SearchTimeout()
        if self.remaining == 0:
            return True
        if not self._feasible():
            return False
        ci = self._pick()
        u, v, ids = self.classes[ci]
        t = len(ids)
        saved = (self.used[u], self.used[v], self.global_used)
        for cols in self._options(ci):
            m = 0
            for c in cols:
                m |= 1 << c
            self.used[u] |= m
            self.used[v] |= m
            self.global_used |= m
            self.unc[u] -= t
            self.unc[v] -= t
            self.done[ci] = True
            self.assigned[ci] = cols
            self.remaining -= t
            if self._solve():
                return True
            self.remaining += t
            self.done[ci] = False
            self.assigned[ci] = None
            self.unc[u] += t
            self.unc[v] += t
            self.used[u], self.used[v], self.global_used = saved
        return False


def find_coloring(g: Multigraph, k: int, *, timeout: float | None = None,
                  seed: int | None = None) -> list[int] | None:
    """A proper ``k``-edge-coloring as a color list, or None if none exists.

    Raises :class:`SearchTimeout` when ``timeout`` seconds pass first.  A seed
    randomizes branching order (useful for sampling diverse colorings).
    """
    deadline = None if timeout is None else time.monotonic() + timeout
    rng = None if seed is None else np.random.default_rng(seed)
    return _Search(g, k, deadline, rng).run()


@dataclass(frozen=True)
class ChromaticResult:
    chi: int | None
    coloring: EdgeColoring | None
    exact: bool
    lower: int
    upper: int
    omega: int | None         # None when the density search itself timed out


def exact_chromatic_index(g: Multigraph, timeout: float | None = None) -> ChromaticResult:
    """chi' by deciding k-colorability upward from max(Delta, omega).

    A timeout yields an inexact result carrying the proven bracket instead of
    raising.
    """
    if g.m == 0:
        raise ValueError("chromatic index needs at least one edge")
    delta, mu = g.max_degree(), g.max_multiplicity()
    upper = delta + mu
    deadline = None if timeout is None else time.monotonic() + timeout
    try:
        omega, _ = density(g, timeout)
    except SearchTimeout:
        return ChromaticResult(None, None, False, delta, upper, None)
    lower = max(delta, omega)
    for k in range(lower, upper + 1):
        left = None if deadline is None else max(0.0, deadline - time.monotonic())
        try:
            colors = find_coloring(g, k, timeout=left)
        except SearchTimeout:
            return ChromaticResult(None, None, False, k, upper, omega)
        if colors is not None:
            return ChromaticResult(k, EdgeColoring(g, k, colors), True, k, k, omega)
    raise AssertionError("no coloring within Vizing's bound; search is broken")


def chromatic_index(g: Multigraph, timeout: float | None = None) -> int:
    res = exact_chromatic_index(g, timeout)
    if not res.exact:
        raise SearchTimeout()
    return res.chi


def colorable(g: Multigraph, k: int, timeout: float | None = None) -> bool:
    if g.m == 0:
        return True
    if k < g.max_degree():
        return False
    if g.n >= 2 and density(g)[0] > k:
        return False
    return find_coloring(g, k, timeout=timeout) is not None


# ---------------------------------------------------------------------------
# criticality and k-triples

@dataclass(frozen=True)
class CriticalityReport:
    k: int
    is_critical: bool
    chi: int | None
    per_edge_chi: tuple[int, ...] = ()
    reason: str = ""


def criticality_check(g: Multigraph, k: int, timeout: float | None = None) -> CriticalityReport:
    """Edge-k-criticality: chi'(G) = k+1 >= Delta+1 and chi'(G-f) <= k for every edge f."""
    if k < g.max_degree():
        return CriticalityReport(k, False, None, reason="k + 1 < Delta + 1")
    if g.m == 0:
        return CriticalityReport(k, False, 0, reason="no edges")
    chi = chromatic_index(g, timeout)
    if chi != k + 1:
        return CriticalityReport(k, False, chi, reason=f"chi' = {chi} != k + 1")
    per_edge = []
    for f in range(g.m):
        h = g.delete_edges([f])
        per_edge.append(chromatic_index(h, timeout) if h.m else 0)
    bad = [f for f, x in enumerate(per_edge) if x > k]
    reason = "" if not bad else f"deleting edge {bad[0]} keeps chi' = {per_edge[bad[0]]}"
    return CriticalityReport(k, not bad, chi, tuple(per_edge), reason)


@dataclass(frozen=True)
class CriticalCore:
    graph: Multigraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]
    chi: int


def critical_core(g: Multigraph, chi: int | None = None, timeout: float | None = None) -> CriticalCore:
    """A (chi'-1)-critical subgraph with the same chromatic index.

    Edges are dropped greedily in id order while chi' survives; isolated
    vertices are removed at the end.  ``vertex_map``/``edge_map`` give the
    original ids of what was kept.
    """
    if chi is None:
        chi = chromatic_index(g, timeout)
    k = chi - 1
    kept = list(range(g.m))
    for f in range(g.m):
        trial = [x for x in kept if x != f]
        h = Multigraph(g.n, [g.edges[x] for x in trial])
        if not colorable(h, k, timeout):
            kept = trial
    h = Multigraph(g.n, [g.edges[x] for x in kept])
    core, vmap = h.without_isolated()
    return CriticalCore(core, tuple(vmap), tuple(kept), chi)


def kempe_walk(c: EdgeColoring, steps: int, rng: np.random.Generator) -> EdgeColoring:
    """Random chain switches; properness and uncolored edges are preserved."""
    if c.k < 2 or c.graph.n == 0:
        return c
    for _ in range(steps):
        v = int(rng.integers(0, c.graph.n))
        a, b = (int(x) for x in rng.choice(c.k, size=2, replace=False))
        c = switch_chain(c, kempe_chain_at(c, v, a, b))
    return c


def make_k_triple(g: Multigraph, e: int, k: int, *, seed: int = 0, check: bool = True,
                  walk: int | None = None, timeout: float | None = None) -> EdgeColoring:
    """A proper k-coloring of G - e with ``e`` uncolored.

    ``check=False`` skips the (expensive) criticality certificate for callers
    that already know G is edge-k-critical.
    """
    if not 0 <= e < g.m:
        raise ValueError(f"edge {e} out of range")
    if k < g.max_degree() + 1:
        raise PreconditionError(f"k = {k} is below Delta + 1 = {g.max_degree() + 1}")
    if check:
        report = criticality_check(g, k, timeout)
        if not report.is_critical:
            raise PreconditionError(f"graph is not edge-{k}-critical: {report.reason}")
    h = g.delete_edges([e])
    colors = find_coloring(h, k, timeout=timeout, seed=seed)
    if colors is None:
        raise NotColorableError(f"G - e has no {k}-coloring")
    colors.insert(e, None)
    c = EdgeColoring(g, k, colors)
    rng = np.random.default_rng(seed)
    return kempe_walk(c, 2 * g.m if walk is None else walk, rng)


@dataclass(frozen=True)
class NearPerfectResult:
    found: bool
    refuted: bool
    coloring: EdgeColoring | None = None
    classes: tuple[tuple[int, ...], ...] = ()
    reason: str = ""


def near_perfect_decomposition(g: Multigraph, e: int, k: int | None = None,
                               timeout: float | None = None) -> NearPerfectResult:
    """Partition E(G) - e into k near-perfect matchings, or prove none exists.

    Every matching of an odd-order graph has at most (n-1)/2 edges, so a
    k-coloring of G - e has only near-perfect classes exactly when
    |E| - 1 = k (n-1)/2; past that count check any k-coloring works.
    """
    if g.n % 2 == 0:
        raise PreconditionError("near-perfect matchings need odd order")
    if k is None:
        k = chromatic_index(g, timeout) - 1
    if k < g.max_degree() + 1:
        raise PreconditionError(f"k = {k} is below Delta + 1")
    half = (g.n - 1) // 2
    if g.m - 1 != k * half:
        return NearPerfectResult(False, True, reason=f"|E| - 1 = {g.m - 1} != k (n-1)/2 = {k * half}")
    h = g.delete_edges([e])
    colors = find_coloring(h, k, timeout=timeout)
    if colors is None:
        return NearPerfectResult(False, True, reason=f"G - e is not {k}-colorable")
    colors.insert(e, None)
    c = EdgeColoring(g, k, colors)
    classes = tuple(tuple(i for i, x in enumerate(colors) if x == col) for col in range(k))
    return NearPerfectResult(True, False, c, classes)


def class_cover(g: Multigraph, edges: Sequence[int]) -> set[int]:
    """Vertices covered by an edge set."""
    out: set[int] = set()
    for f in edges:
        out.update(g.edges[f])
    return out
