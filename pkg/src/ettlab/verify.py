"""Definition-level checkers.

Everything here recomputes from the raw edge list and color tuple with
plain sets, sharing no code with the builders, so builder output can be
cross-examined and certificates re-validated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .multigraph import Multigraph


@dataclass(frozen=True)
class Verdict:
    ok: bool
    detail: str = ""

    def __bool__(self):
        return self.ok


def _missing(g: Multigraph, colors: Sequence[int | None], k: int, v: int) -> set[int]:
    used = {colors[i] for i, (a, b) in enumerate(g.edges) if v in (a, b) and colors[i] is not None}
    return set(range(k)) - used


def _boundary(g: Multigraph, S: set[int]) -> list[int]:
    return [i for i, (a, b) in enumerate(g.edges) if (a in S) != (b in S)]


def check_proper(g: Multigraph, colors: Sequence[int | None], k: int) -> Verdict:
    if len(colors) != g.m:
        return Verdict(False, "coloring length does not match edge count")
    for v in range(g.n):
        seen = set()
        for i, (a, b) in enumerate(g.edges):
            if v not in (a, b) or colors[i] is None:
                continue
            if not 0 <= colors[i] < k:
                return Verdict(False, f"edge {i} has color {colors[i]} outside 0..{k - 1}")
            if colors[i] in seen:
                return Verdict(False, f"color {colors[i]} repeats at vertex {v}")
            seen.add(colors[i])
    return Verdict(True)


def check_elementary(g: Multigraph, colors, k: int, S: Iterable[int]) -> Verdict:
    S = list(S)
    for i, v in enumerate(S):
        for w in S[i + 1:]:
            common = _missing(g, colors, k, v) & _missing(g, colors, k, w)
            if common:
                return Verdict(False, f"vertices {v} and {w} both miss {min(common)}")
    return Verdict(True)


def check_closed(g: Multigraph, colors, k: int, S: Iterable[int]) -> Verdict:
    S = set(S)
    miss = set().union(*(_missing(g, colors, k, v) for v in S)) if S else set()
    for i in _boundary(g, S):
        if colors[i] in miss:
            return Verdict(False, f"boundary edge {i} carries missing color {colors[i]}")
    return Verdict(True)


def check_tashkinov(g: Multigraph, colors, k: int, vertices: Sequence[int], edges: Sequence[int]) -> Verdict:
    return check_ett_sequence(g, colors, k, vertices, edges, {})


def check_ett_sequence(g: Multigraph, colors, k: int, vertices: Sequence[int], edges: Sequence[int],
                       connecting: dict[int, tuple[int, int]]) -> Verdict:
    """``connecting`` maps a position i (edge ``edges[i-1]`` joining vertex i)
    to its claimed (delta, gamma)."""
    if len(edges) != len(vertices) - 1 or len(set(vertices)) != len(vertices) or not edges:
        return Verdict(False, "malformed tree sequence")
    e = edges[0]
    if set(g.edges[e]) != {vertices[0], vertices[1]} or colors[e] is not None:
        return Verdict(False, "the first edge must be the uncolored edge joining the first two vertices")
    for i in range(2, len(vertices)):
        f = edges[i - 1]
        a, b = g.edges[f]
        earlier = set(vertices[:i])
        if vertices[i] not in (a, b) or ({a, b} - {vertices[i]}) - earlier or a == b:
            return Verdict(False, f"edge {f} does not join vertex {vertices[i]} to the tree")
        col = colors[f]
        if col is None:
            return Verdict(False, f"edge {f} is uncolored")
        if i in connecting:
            delta, gamma = connecting[i]
            v = _connecting_ok(g, colors, k, vertices[:i], edges[:i - 1], f, delta, gamma)
            if not v:
                return Verdict(False, f"position {i}: {v.detail}")
        elif not any(col in _missing(g, colors, k, y) for y in earlier):
            return Verdict(False, f"edge {f} color {col} is not missing before it")
    return Verdict(True)


def _connecting_ok(g, colors, k, verts, tree_edges, f, delta, gamma) -> Verdict:
    S = set(verts)
    if not check_closed(g, colors, k, S):
        return Verdict(False, "segment before a connecting edge is not closed")
    bd = _boundary(g, S)
    if f not in bd or colors[f] != delta:
        return Verdict(False, "connecting edge must be a boundary edge with the connecting color")
    if sum(1 for i in bd if colors[i] == delta) < 2:
        return Verdict(False, "connecting color is not defective")
    if gamma in {colors[i] for i in tree_edges}:
        return Verdict(False, "companion color is used on the segment")
    holders = [v for v in verts if gamma in _missing(g, colors, k, v)]
    if len(holders) != 1:
        return Verdict(False, "companion color must be missing at exactly one segment vertex")
    v, want, prev = holders[0], delta, None
    for _ in range(g.m + 1):
        nxt = [i for i, (a, b) in enumerate(g.edges) if v in (a, b) and colors[i] == want]
        if not nxt:
            return Verdict(False, "path ends inside the segment")
        i = nxt[0]
        a, b = g.edges[i]
        w = b if a == v else a
        if w not in S:
            return Verdict(i == f, "" if i == f else f"first crossing is edge {i}, not {f}")
        v, want = w, gamma if want == delta else delta
    return Verdict(False, "path does not leave the segment")


def check_ett_definition(g: Multigraph, c, tree, records) -> Verdict:
    """``tree`` is a TreeSeq, ``records`` connecting records; ``c`` an EdgeColoring."""
    connecting = {}
    for r in records:
        if r.prefix < 2 or r.prefix >= len(tree.vertices) or tree.edges[r.prefix - 1] != r.edge:
            return Verdict(False, f"connecting edge {r.edge} is not at position {r.prefix}")
        connecting[r.prefix] = (r.delta, r.gamma)
    return check_ett_sequence(g, c.colors, c.k, tree.vertices, tree.edges, connecting)
