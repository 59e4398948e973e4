"""Partial proper edge colorings, Kempe chains and boundary bookkeeping.

Colors are ``0..k-1``; an uncolored edge holds ``None``.  Per-vertex color
sets are kept as int bitmasks (bit ``c`` set means color ``c``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .multigraph import Multigraph


class StaleChainError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def mask_of(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        m |= 1 << c
    return m


def colors_of(mask: int) -> frozenset[int]:
    out = []
    c = 0
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return frozenset(out)


def lowest_colors(mask: int, count: int) -> list[int]:
    """The ``count`` smallest colors of ``mask`` (fewer if the mask is short)."""
    out = []
    while mask and len(out) < count:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class EdgeColoring:
    """A (possibly partial) assignment of colors ``0..k-1`` to the edges of ``graph``.

    Instances are treated as values: ``recolored`` and the switch functions
    return new objects.  ``present[v]`` caches the colors seen at ``v``.
    """

    __slots__ = ("graph", "k", "colors", "present", "_at")

    def __init__(self, graph: Multigraph, k: int, colors: Sequence[int | None]):
        if len(colors) != graph.m:
            raise ValueError(f"expected {graph.m} colors, got {len(colors)}")
        self.graph = graph
        self.k = k
        self.colors = tuple(colors)
        present = [0] * graph.n
        at: list[dict[int, int]] = [{} for _ in range(graph.n)]
        for i, c in enumerate(self.colors):
            if c is None:
                continue
            u, v = graph.edges[i]
            present[u] |= 1 << c
            present[v] |= 1 << c
            at[u].setdefault(c, i)
            at[v].setdefault(c, i)
        self.present = present
        self._at = at

    @classmethod
    def uncolored(cls, graph: Multigraph, k: int) -> "EdgeColoring":
        return cls(graph, k, [None] * graph.m)

    def __eq__(self, other):
        return (isinstance(other, EdgeColoring) and self.k == other.k
                and self.graph == other.graph and self.colors == other.colors)

    def __hash__(self):
        return hash((self.k, self.colors))

    def __repr__(self):
        return f"EdgeColoring(k={self.k}, colors={list(self.colors)})"

    @property
    def full_mask(self) -> int:
        return (1 << self.k) - 1

    def missing_mask(self, v: int) -> int:
        return self.full_mask & ~self.present[v]

    def present_colors(self, v: int) -> frozenset[int]:
        return colors_of(self.present[v])

    def missing(self, v: int) -> frozenset[int]:
        return colors_of(self.missing_mask(v))

    def edge_at(self, v: int, color: int) -> int | None:
        """The edge of color ``color`` at ``v`` (None if the color is missing there)."""
        return self._at[v].get(color)

    def uncolored_edges(self) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c is None]

    def recolored(self, changes: dict[int, int | None]) -> "EdgeColoring":
        colors = list(self.colors)
        for i, c in changes.items():
            colors[i] = c
        return EdgeColoring(self.graph, self.k, colors)

    def to_json(self) -> dict:
        return {"k": self.k, "colors": list(self.colors)}

    @classmethod
    def from_json(cls, graph: Multigraph, data: dict) -> "EdgeColoring":
        return cls(graph, int(data["k"]), list(data["colors"]))


# ---------------------------------------------------------------------------
# validity

@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    vertex: int | None = None
    edges: tuple[int, int] | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


def validate_proper(g: Multigraph, c: EdgeColoring) -> ValidityReport:
    """First properness conflict, or OK.  Also cross-checks the cached per-vertex sets."""
    if c.graph.m != g.m or len(c.colors) != g.m:
        return ValidityReport(False, message="assignment does not cover every edge")
    for i, col in enumerate(c.colors):
        if col is not None and not (isinstance(col, int) and 0 <= col < c.k):
            return ValidityReport(False, edges=(i, i), message=f"edge {i} has color {col!r} outside 0..{c.k - 1}")
    for v in range(g.n):
        seen: dict[int, int] = {}
        mask = 0
        for f in g.incident[v]:
            col = c.colors[f]
            if col is None:
                continue
            if col in seen:
                return ValidityReport(False, v, (seen[col], f),
                                      f"edges {seen[col]} and {f} share color {col} at vertex {v}")
            seen[col] = f
            mask |= 1 << col
        if mask != c.present[v]:
            return ValidityReport(False, v, message=f"cached color set at vertex {v} is stale")
    return ValidityReport(True)


def is_proper(g: Multigraph, c: EdgeColoring) -> bool:
    return validate_proper(g, c).ok


# ---------------------------------------------------------------------------
# color-set queries

def missing_mask(c: EdgeColoring, scope: int | Iterable[int]) -> int:
    if isinstance(scope, int):
        return c.missing_mask(scope)
    m = 0
    for v in scope:
        m |= c.missing_mask(v)
    return m


def missing_colors(c: EdgeColoring, scope: int | Iterable[int]) -> frozenset[int]:
    """Missing colors at a vertex, or their union over a vertex set."""
    return colors_of(missing_mask(c, scope))


def induced_colors(c: EdgeColoring, H: Iterable[int]) -> frozenset[int]:
    """Colors on edges with both ends in ``H``."""
    hs = set(H)
    return frozenset(col for i, col in enumerate(c.colors)
                     if col is not None and c.graph.edges[i][0] in hs and c.graph.edges[i][1] in hs)


def boundary_colors(c: EdgeColoring, H: Iterable[int]) -> frozenset[int]:
    """Colors on edges with exactly one end in ``H``."""
    return frozenset(c.colors[b.edge] for b in boundary(c.graph, H) if c.colors[b.edge] is not None)


def incident_colors(c: EdgeColoring, H: Iterable[int]) -> frozenset[int]:
    """Colors on edges with at least one end in ``H``."""
    m = 0
    for v in H:
        m |= c.present[v]
    return colors_of(m)


@dataclass(frozen=True)
class BoundaryEdge:
    edge: int
    in_end: int
    out_end: int


def boundary(g: Multigraph, S: Iterable[int]) -> list[BoundaryEdge]:
    """Edges with exactly one end in ``S``, by increasing edge id."""
    inside = set(S)
    out = []
    for i, (u, v) in enumerate(g.edges):
        if (u in inside) != (v in inside):
            out.append(BoundaryEdge(i, u, v) if u in inside else BoundaryEdge(i, v, u))
    return out


def boundary_mask(c: EdgeColoring, S: Iterable[int]) -> int:
    m = 0
    for b in boundary(c.graph, S):
        col = c.colors[b.edge]
        if col is not None:
            m |= 1 << col
    return m


# ---------------------------------------------------------------------------
# Kempe chains

@dataclass(frozen=True)
class KempeChain:
    """A maximal alternating (alpha, beta) path or even cycle.

    ``vertices`` lists the chain in walking order (a cycle does not repeat its
    first vertex); ``edges[i]`` joins ``vertices[i]`` and ``vertices[i+1]``.
    ``edge_colors`` remembers the colors at extraction time so a switch can
    detect that the coloring moved on.
    """

    alpha: int
    beta: int
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    edge_colors: tuple[int, ...]
    kind: str

    @property
    def ends(self) -> tuple[int, ...]:
        if self.kind == "cycle":
            return ()
        return (self.vertices[0], self.vertices[-1])

    def __len__(self):
        return len(self.edges)


def _walk(c: EdgeColoring, start: int, first: int, second: int) -> tuple[list[int], list[int]]:
    """Follow colors first, second, first, ... from ``start``.  Stops at a dead end or on return to start."""
    verts: list[int] = []
    edges: list[int] = []
    v = start
    want, other = first, second
    while True:
        f = c.edge_at(v, want)
        if f is None:
            break
        w = c.graph.other_end(f, v)
        edges.append(f)
        verts.append(w)
        if w == start:
            break
        v = w
        want, other = other, want
    return verts, edges


def kempe_chain_at(c: EdgeColoring, v: int, alpha: int, beta: int) -> KempeChain:
    if alpha == beta:
        raise ValueError("chain colors must differ")
    if not (0 <= alpha < c.k and 0 <= beta < c.k):
        raise ValueError("chain colors out of range")
    fwd_v, fwd_e = _walk(c, v, alpha, beta)
    if fwd_v and fwd_v[-1] == v:
        verts = (v, *fwd_v[:-1])
        edges = tuple(fwd_e)
        kind = "cycle"
    else:
        back_v, back_e = _walk(c, v, beta, alpha)
        verts = (*reversed(back_v), v, *fwd_v)
        edges = (*reversed(back_e), *fwd_e)
        kind = "path"
    return KempeChain(alpha, beta, tuple(verts), tuple(edges),
                      tuple(c.colors[f] for f in edges), kind)


def switch_chain(c: EdgeColoring, chain: KempeChain) -> EdgeColoring:
    """Swap alpha and beta on the chain's edges."""
    if not chain.edges:
        return c
    if tuple(c.colors[f] for f in chain.edges) != chain.edge_colors:
        raise StaleChainError("chain edge colors no longer match the coloring")
    fresh = kempe_chain_at(c, chain.vertices[0], chain.alpha, chain.beta)
    if set(fresh.edges) != set(chain.edges):
        raise StaleChainError("chain is no longer maximal in the coloring")
    a, b = chain.alpha, chain.beta
    return c.recolored({f: (b if c.colors[f] == a else a) for f in chain.edges})


def switch_outside(c: EdgeColoring, T: Iterable[int], alpha: int, beta: int) -> EdgeColoring:
    """Swap alpha and beta on every edge not inside ``G[T]``.

    Requires that neither color appears on the boundary of ``T``; then the
    edges outside are a union of whole (alpha, beta)-chains and the result
    stays proper.
    """
    if alpha == beta:
        raise PreconditionError("switch colors must differ")
    inside = set(T)
    on_boundary = boundary_mask(c, inside)
    if on_boundary >> alpha & 1 or on_boundary >> beta & 1:
        raise PreconditionError(f"color {alpha if on_boundary >> alpha & 1 else beta} appears on the boundary")
    changes = {}
    for i, col in enumerate(c.colors):
        u, v = c.graph.edges[i]
        if u in inside and v in inside:
            continue
        if col == alpha:
            changes[i] = beta
        elif col == beta:
            changes[i] = alpha
    return c.recolored(changes)


# ---------------------------------------------------------------------------
# legs

@dataclass(frozen=True)
class Leg:
    """Chain fragment from an exit vertex in H out to a far end outside H."""

    alpha: int
    beta: int
    exit: int
    far_end: int
    vertices: tuple[int, ...]
    edges: tuple[int, ...]


def legs_of(c: EdgeColoring, H: Iterable[int], alpha: int, beta: int) -> list[Leg]:
    """All (alpha, beta)-legs of ``H``, ordered by far end."""
    inside = set(H)
    pair = (1 << alpha) | (1 << beta)
    legs = []
    for w in range(c.graph.n):
        if w in inside:
            continue
        seen = c.present[w] & pair
        if seen == 0 or seen == pair:
            continue
        first = alpha if seen >> alpha & 1 else beta
        verts, edges = _walk(c, w, first, beta if first == alpha else alpha)
        for i, x in enumerate(verts):
            if x in inside:
                vs = (x, *reversed(verts[:i]), w)
                legs.append(Leg(alpha, beta, x, w, vs, tuple(reversed(edges[:i + 1]))))
                break
    return legs


def interchangeable(c: EdgeColoring, H: Iterable[int], alpha: int, beta: int) -> bool:
    return len(legs_of(c, H, alpha, beta)) <= 1


def is_b_closed(c: EdgeColoring, H: Iterable[int], B: Iterable[int]) -> bool:
    return boundary_mask(c, H) & mask_of(B) == 0


def is_b_minus_closed(c: EdgeColoring, H: Iterable[int], B: Iterable[int]) -> bool:
    hs = list(H)
    return boundary_mask(c, hs) & (missing_mask(c, hs) & ~mask_of(B)) == 0
