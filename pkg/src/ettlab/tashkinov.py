"""Tashkinov trees, the augmenting procedure (TAA), and set-level condition checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .coloring import EdgeColoring, PreconditionError, boundary, colors_of, validate_proper
from .multigraph import Multigraph


@dataclass(frozen=True)
class TreeSeq:
    """Alternating sequence ``(y0, e1, y1, e2, y2, ...)``.

    ``edges[i-1]`` is ``e_i`` and joins ``vertices[i]`` to an earlier vertex.
    Prefixes are addressed by their vertex count.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(self.edges) != max(0, len(self.vertices) - 1):
            raise ValueError("a tree sequence has one edge fewer than vertices")

    @classmethod
    def start(cls, g: Multigraph, e: int) -> "TreeSeq":
        u, v = g.edges[e]
        return cls((u, v), (e,))

    def __len__(self):
        return len(self.vertices)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def extend(self, edge: int, vertex: int) -> "TreeSeq":
        return TreeSeq(self.vertices + (vertex,), self.edges + (edge,))

    def prefix(self, size: int) -> "TreeSeq":
        """Segment holding the first ``size`` vertices."""
        if not 0 <= size <= len(self.vertices):
            raise ValueError("prefix size out of range")
        return TreeSeq(self.vertices[:size], self.edges[:max(0, size - 1)])

    def sequence(self) -> list[int]:
        """Flat alternating list ``[y0, e1, y1, ...]``."""
        out = [self.vertices[0]] if self.vertices else []
        for f, y in zip(self.edges, self.vertices[1:]):
            out.extend((f, y))
        return out

    @classmethod
    def from_sequence(cls, seq: Sequence[int]) -> "TreeSeq":
        if len(seq) % 2 == 0:
            raise ValueError("alternating sequence must have odd length")
        return cls(tuple(seq[0::2]), tuple(seq[1::2]))


def tree_color_mask(c: EdgeColoring, T: TreeSeq, start: int = 0) -> int:
    """Colors on the tree edges added after the first ``start`` vertices."""
    m = 0
    for f in T.edges[max(0, start - 1):]:
        col = c.colors[f]
        if col is not None:
            m |= 1 << col
    return m


def tree_colors(c: EdgeColoring, T: TreeSeq) -> frozenset[int]:
    return colors_of(tree_color_mask(c, T))


def missing_in(c: EdgeColoring, vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= c.missing_mask(v)
    return m


def first_missing(c: EdgeColoring, T: TreeSeq, color: int) -> int | None:
    """Position of the first vertex of ``T`` missing ``color``, or None."""
    for i, v in enumerate(T.vertices):
        if c.missing_mask(v) >> color & 1:
            return i
    return None


def check_k_triple(g: Multigraph, c: EdgeColoring, e: int) -> None:
    if c.colors[e] is not None:
        raise PreconditionError(f"edge {e} must be uncolored")
    others = [i for i, x in enumerate(c.colors) if x is None and i != e]
    if others:
        raise PreconditionError(f"edge {others[0]} is uncolored as well")
    if c.k < g.max_degree() + 1:
        raise PreconditionError(f"k = {c.k} is below Delta + 1 = {g.max_degree() + 1}")
    report = validate_proper(g, c)
    if not report.ok:
        raise PreconditionError(report.message)


def edge_rank(m: int, seed: int | None) -> list[int]:
    """Priority of each edge id in TAA; identity unless a seed shuffles it."""
    if seed is None:
        return list(range(m))
    perm = np.random.default_rng(seed).permutation(m)
    rank = [0] * m
    for r, f in enumerate(perm):
        rank[int(f)] = r
    return rank


def taa(c: EdgeColoring, T: TreeSeq, *, rank: Sequence[int] | None = None,
        blocked: Callable[[int, int, TreeSeq], bool] | None = None,
        key: Callable[[int, TreeSeq], tuple] | None = None) -> TreeSeq:
    """Grow ``T`` by boundary edges whose color is missing somewhere on ``T``.

    Among eligible edges the one with the smallest ``key`` (default: rank) is
    added.  ``blocked(edge, color, T)`` vetoes candidates.  Stops when nothing
    is eligible.
    """
    g = c.graph
    inside = set(T.vertices)
    miss = missing_in(c, T.vertices)
    while True:
        best = None
        best_key = None
        for b in boundary(g, inside):
            col = c.colors[b.edge]
            if col is None or not miss >> col & 1:
                continue
            if blocked is not None and blocked(b.edge, col, T):
                continue
            k = key(b.edge, T) if key is not None else ((rank[b.edge] if rank else b.edge),)
            if best_key is None or k < best_key:
                best, best_key = b, k
        if best is None:
            return T
        T = T.extend(best.edge, best.out_end)
        inside.add(best.out_end)
        miss |= c.missing_mask(best.out_end)


def build_maximal_tashkinov(g: Multigraph, c: EdgeColoring, e: int, seed: int | None = None) -> TreeSeq:
    """Run TAA from ``(y0, e, y1)`` until no boundary edge can be added."""
    check_k_triple(g, c, e)
    return taa(c, TreeSeq.start(g, e), rank=edge_rank(g.m, seed))


def is_tashkinov_tree(g: Multigraph, c: EdgeColoring, T: TreeSeq, e: int) -> bool:
    """Definition check, independent of :func:`taa`."""
    if not T.edges or T.edges[0] != e or len(set(T.vertices)) != len(T.vertices):
        return False
    if set(g.edges[e]) != {T.vertices[0], T.vertices[1]}:
        return False
    for i in range(2, len(T.vertices)):
        f = T.edges[i - 1]
        a, b = g.edges[f]
        earlier = T.vertices[:i]
        if T.vertices[i] not in (a, b):
            return False
        other = b if a == T.vertices[i] else a
        if other not in earlier:
            return False
        col = c.colors[f]
        if col is None or not any(col in c.missing(y) for y in earlier):
            return False
    return True


# ---------------------------------------------------------------------------
# set conditions

@dataclass(frozen=True)
class ElementaryFlag:
    ok: bool
    witness: tuple[int, int, int] | None = None  # (v, w, shared missing color)

    def __bool__(self):
        return self.ok


def verify_elementary(c: EdgeColoring, S: Iterable[int]) -> ElementaryFlag:
    """Missing-color sets of distinct vertices of ``S`` are pairwise disjoint."""
    owner: dict[int, int] = {}
    for v in S:
        for col in sorted(c.missing(v)):
            if col in owner and owner[col] != v:
                return ElementaryFlag(False, (owner[col], v, col))
            owner[col] = v
    return ElementaryFlag(True)


@dataclass(frozen=True)
class ConditionFlags:
    elementary: bool
    closed: bool
    strongly_closed: bool
    elementary_witness: tuple[int, int, int] | None = None
    closed_witness: int | None = None                   # boundary edge with an S-missing color
    strong_witness: tuple[int, int] | None = None       # two boundary edges sharing a color
    b_closed: bool | None = None
    b_minus_closed: bool | None = None

    def as_dict(self) -> dict:
        return {"elementary": self.elementary, "closed": self.closed,
                "strongly_closed": self.strongly_closed}


def closure_report(c: EdgeColoring, S: Iterable[int], B: Iterable[int] | None = None) -> ConditionFlags:
    """Closed / strongly closed / elementary flags of a vertex set, with witnesses.

    With ``B``: also ``B``-closed (no boundary color in B) and ``B``-minus-closed
    (no boundary color in ``missing(S) - B``).
    """
    verts = list(S)
    miss = missing_in(c, verts)
    closed_witness = None
    strong_witness = None
    seen: dict[int, int] = {}
    bmask = 0
    for b in boundary(c.graph, verts):
        col = c.colors[b.edge]
        if col is None:
            continue
        bmask |= 1 << col
        if closed_witness is None and miss >> col & 1:
            closed_witness = b.edge
        if col in seen and strong_witness is None:
            strong_witness = (seen[col], b.edge)
        seen.setdefault(col, b.edge)
    closed = closed_witness is None
    elem = verify_elementary(c, verts)
    b_closed = b_minus = None
    if B is not None:
        bm = 0
        for col in B:
            bm |= 1 << col
        b_closed = bmask & bm == 0
        b_minus = bmask & (miss & ~bm) == 0
    return ConditionFlags(elem.ok, closed, closed and strong_witness is None,
                          elem.witness, closed_witness, strong_witness, b_closed, b_minus)
