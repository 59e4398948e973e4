"""Extended Tashkinov trees: connecting edges, ladders, R1/R2, split tails, SETTs.

Reading of "colors used by H" for a tree: the colors on the tree's own
edges (not every edge induced by its vertex set).  Companion freshness and
the reserved-set checks below all use that reading.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .coloring import (EdgeColoring, PreconditionError, boundary, boundary_mask, colors_of,
                       lowest_colors)
from .multigraph import Multigraph
from .tashkinov import (TreeSeq, check_k_triple, closure_report, edge_rank, missing_in, taa,
                        tree_color_mask, verify_elementary)


class NotClosedError(PreconditionError):
    pass


class NonElementaryError(RuntimeError):
    """A set that the theory says is elementary is not.  Carries the witness."""

    def __init__(self, message: str, witness: tuple[int, ...], tree: TreeSeq | None = None):
        super().__init__(message)
        self.witness = witness
        self.tree = tree


class ReservedSetInfeasible(RuntimeError):
    """Not enough colors to mint a two-color reserved set."""

    def __init__(self, message: str, stage: int, delta: int, tree: TreeSeq):
        super().__init__(message)
        self.stage = stage
        self.delta = delta
        self.tree = tree


@dataclass(frozen=True)
class ConnectingRecord:
    """Connecting edge ``edge`` of the closed segment with ``prefix`` vertices.

    ``source`` is the segment vertex missing ``gamma``; ``path`` holds the
    (delta, gamma)-path edges from ``source`` up to and including ``edge``.
    """

    index: int
    edge: int
    delta: int
    gamma: int
    prefix: int
    source: int
    path: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"index": self.index, "edge": self.edge, "delta": self.delta, "gamma": self.gamma,
                "prefix": self.prefix, "source": self.source, "path": list(self.path)}

    @classmethod
    def from_dict(cls, d: dict) -> "ConnectingRecord":
        return cls(int(d["index"]), int(d["edge"]), int(d["delta"]), int(d["gamma"]),
                   int(d["prefix"]), int(d["source"]), tuple(int(x) for x in d["path"]))


@dataclass(frozen=True)
class Ladder:
    n: int
    positions: tuple[int, ...]          # |T_1|, ..., |T_n|
    first_index: tuple[int, ...]        # m_i (1-based)
    last_index: tuple[int, ...]         # M_i (1-based)

    @classmethod
    def of(cls, records: Sequence[ConnectingRecord]) -> "Ladder":
        deltas = [r.delta for r in records]
        first = tuple(deltas.index(d) + 1 for d in deltas)
        last = tuple(len(deltas) - deltas[::-1].index(d) for d in deltas)
        return cls(len(records), tuple(r.prefix for r in records), first, last)


@dataclass(frozen=True)
class SplitTail:
    """Splitters ``T_n = T_{n,0} < T_{n,1} < ... < T_{n,q}`` plus reserved sets.

    ``positions[j]`` is the vertex count of ``T_{n,j}``; ``reserved[j]`` maps
    each deficient connecting color to its two reserved colors at stage j.
    """

    positions: tuple[int, ...]
    reserved: tuple[dict, ...]

    @property
    def q(self) -> int:
        return len(self.positions) - 1

    def as_dict(self) -> dict:
        return {"positions": list(self.positions),
                "reserved": [[[d, *sorted(g)] for d, g in sorted(r.items())] for r in self.reserved]}

    @classmethod
    def from_dict(cls, d: dict) -> "SplitTail":
        return cls(tuple(int(x) for x in d["positions"]),
                   tuple({int(row[0]): tuple(int(x) for x in row[1:]) for row in r} for r in d["reserved"]))


@dataclass(frozen=True)
class ETT:
    tree: TreeSeq
    records: tuple[ConnectingRecord, ...] = ()
    split: SplitTail | None = None

    @property
    def ladder(self) -> Ladder:
        return Ladder.of(self.records)

    @property
    def rungs(self) -> int:
        return len(self.records)

    def rung(self, i: int) -> TreeSeq:
        """``T_i`` for ``1 <= i <= n``; ``T_0`` is the empty sequence."""
        if i == 0:
            return self.tree.prefix(0)
        return self.tree.prefix(self.records[i - 1].prefix)

    def sizes(self) -> tuple[int, ...]:
        return tuple(r.prefix for r in self.records) + (len(self.tree),)

    def as_dict(self) -> dict:
        return {"sequence": self.tree.sequence(),
                "ladder": list(self.ladder.positions),
                "connecting": [r.as_dict() for r in self.records],
                "split_tail": None if self.split is None else self.split.as_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "ETT":
        split = d.get("split_tail")
        return cls(TreeSeq.from_sequence(d["sequence"]),
                   tuple(ConnectingRecord.from_dict(r) for r in d["connecting"]),
                   None if split is None else SplitTail.from_dict(split))


# ---------------------------------------------------------------------------
# connecting edges

def _cross(g: Multigraph, T: TreeSeq, f: int) -> TreeSeq:
    a, b = g.edges[f]
    return T.extend(f, b if a in T.vertex_set else a)


def trace_to_boundary(c: EdgeColoring, inside: set[int], start: int, delta: int, gamma: int) -> tuple[int, ...] | None:
    """Edges of the (delta, gamma)-path from ``start`` up to its first boundary edge, or None."""
    path = []
    v, want = start, delta
    while True:
        f = c.edge_at(v, want)
        if f is None:
            return None
        path.append(f)
        w = c.graph.other_end(f, v)
        if w not in inside:
            return tuple(path)
        if w == start:
            return None
        v, want = w, (gamma if want == delta else delta)


def find_connecting_edges(g: Multigraph, c: EdgeColoring, T: TreeSeq) -> list[ConnectingRecord]:
    """Connecting-edge candidates of a closed tree, ordered by (delta, gamma)."""
    report = closure_report(c, T.vertices)
    if not report.closed:
        raise NotClosedError(f"tree is not closed: boundary edge {report.closed_witness}")
    inside = set(T.vertices)
    counts: dict[int, int] = {}
    for b in boundary(g, inside):
        col = c.colors[b.edge]
        if col is not None:
            counts[col] = counts.get(col, 0) + 1
    defective = sorted(col for col, t in counts.items() if t >= 2)
    if not defective:
        return []
    companions = missing_in(c, T.vertices) & ~tree_color_mask(c, T)
    out = []
    for gamma in sorted(colors_of(companions)):
        holders = [v for v in T.vertices if c.missing_mask(v) >> gamma & 1]
        if len(holders) > 1:
            raise NonElementaryError(f"color {gamma} is missing at {holders[0]} and {holders[1]}",
                                     (holders[0], holders[1], gamma), T)
        for delta in defective:
            path = trace_to_boundary(c, inside, holders[0], delta, gamma)
            if path is not None:
                out.append(ConnectingRecord(0, path[-1], delta, gamma, len(T), holders[0], path))
    out.sort(key=lambda r: (r.delta, r.gamma))
    return out


# ---------------------------------------------------------------------------
# R1

@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.ok


def verify_r1(c: EdgeColoring, tree: TreeSeq, records: Sequence[ConnectingRecord]) -> CheckResult:
    """gamma_i is missing on T_{m_i} and unused on the edges of T_{M_i}, for every rung."""
    ladder = Ladder.of(records)
    for i, r in enumerate(records, start=1):
        low = tree.prefix(records[ladder.first_index[i - 1] - 1].prefix)
        high = tree.prefix(records[ladder.last_index[i - 1] - 1].prefix)
        if not missing_in(c, low.vertices) >> r.gamma & 1:
            return CheckResult(False, (i,), f"gamma_{i} = {r.gamma} not missing on T_{ladder.first_index[i - 1]}")
        if tree_color_mask(c, high) >> r.gamma & 1:
            return CheckResult(False, (i,), f"gamma_{i} = {r.gamma} used on T_{ladder.last_index[i - 1]}")
    return CheckResult(True)


@dataclass(frozen=True)
class ETTPolicy:
    max_rungs: int | None = None
    distinct_colors: bool = True     # prefer connecting colors not used by earlier rungs
    seed: int | None = None          # shuffles TAA edge priority


def build_ett(g: Multigraph, c: EdgeColoring, e: int, policy: ETTPolicy = ETTPolicy()) -> ETT:
    """Alternate TAA closure and R1-admissible connecting-edge steps."""
    check_k_triple(g, c, e)
    rank = edge_rank(g.m, policy.seed)
    T = TreeSeq.start(g, e)
    records: list[ConnectingRecord] = []
    while True:
        T = taa(c, T, rank=rank)
        if policy.max_rungs is not None and len(records) >= policy.max_rungs:
            break
        used = {r.delta for r in records}
        choice = None
        cands = find_connecting_edges(g, c, T)
        if policy.distinct_colors:
            cands.sort(key=lambda r: (r.delta in used, r.delta, r.gamma))
        for cand in cands:
            trial = records + [replace(cand, index=len(records) + 1)]
            if verify_r1(c, T, trial):
                choice = trial[-1]
                break
        if choice is None:
            break
        records.append(choice)
        T = _cross(g, T, choice.edge)
    return ETT(T, tuple(records))


# ---------------------------------------------------------------------------
# R2

def _segment_after(tree: TreeSeq, start: int, stop: int) -> tuple[int, ...]:
    """Tree edges in prefix(stop) that are not in prefix(start)."""
    if stop <= start:
        return ()
    return tree.edges[max(0, start - 1):stop - 1]


def _first_missing_prefix(c: EdgeColoring, tree: TreeSeq, size: int, color: int) -> int:
    """Vertex count of the segment of prefix(size) ending at v(color); whole prefix if absent."""
    for i, v in enumerate(tree.vertices[:size]):
        if c.missing_mask(v) >> color & 1:
            return i + 1
    return size


def verify_r2(g: Multigraph, c: EdgeColoring, ett: ETT, split: SplitTail | None = None) -> CheckResult:
    """Check the supplied split tail and reserved sets clause by clause."""
    split = split if split is not None else ett.split
    records = ett.records
    tree = ett.tree
    if not records:
        return CheckResult(True, detail="no rungs")
    if split is None:
        return CheckResult(False, ("split",), "no split tail supplied")
    pos = split.positions
    if pos[0] != records[-1].prefix:
        return CheckResult(False, ("positions",), "T_{n,0} must be T_n")
    if any(b <= a for a, b in zip(pos, pos[1:])) or pos[-1] > len(tree):
        return CheckResult(False, ("positions",), "splitter positions must increase inside T")
    if len(split.reserved) != len(pos):
        return CheckResult(False, ("positions",), "one reserved map per splitter stage")
    deltas = {r.delta for r in records}
    sizes = list(pos) + [len(tree)]
    q = split.q

    def deficient(j):
        miss = missing_in(c, tree.vertices[:sizes[j]])
        return {d for d in deltas if not miss >> d & 1}

    for j in range(q + 1):
        D = deficient(j)
        res = split.reserved[j]
        if set(res) != D:
            return CheckResult(False, ("1", j), f"reserved sets at stage {j} cover {sorted(res)}, need {sorted(D)}")
        miss_j = missing_in(c, tree.vertices[:sizes[j]])
        union = 0
        for d in sorted(D):
            gam = res[d]
            gm = (1 << gam[0]) | (1 << gam[1]) if len(gam) == 2 else 0
            if len(gam) != 2 or gam[0] == gam[1]:
                return CheckResult(False, ("1", j, d), "reserved set must hold two distinct colors")
            if gm & ~miss_j:
                return CheckResult(False, ("1", j, d), "reserved color not missing on T_{n,j}")
            stop = _first_missing_prefix(c, tree, sizes[j + 1], d)
            used = 0
            for f in _segment_after(tree, sizes[j], stop):
                if c.colors[f] is not None:
                    used |= 1 << c.colors[f]
            if gm & used:
                return CheckResult(False, ("1", j, d), "reserved color used before v(delta)")
            if union & gm:
                return CheckResult(False, ("1a", j, d), "reserved sets overlap")
            union |= gm
        if j < q:
            nxt = 0
            for d, gam in split.reserved[j + 1].items():
                for x in gam:
                    nxt |= 1 << x
            fresh = missing_in(c, tree.vertices[sizes[j]:sizes[j + 1]])
            if nxt & ~union & ~fresh:
                return CheckResult(False, ("1b", j), "new reserved colors not missing on T_{n,j+1} - T_{n,j}")
        B = 0
        if j > 0:
            prev = split.reserved[j - 1]
            for d in D:
                if d not in prev:
                    return CheckResult(False, ("2", j), f"no stage {j - 1} reserved set for {d}")
                for x in prev[d]:
                    B |= 1 << x
        seg = tree.vertices[:sizes[j]]
        bmask = boundary_mask(c, seg)
        if bmask & (missing_in(c, seg) & ~B):
            return CheckResult(False, ("2", j), f"T_(n,{j}) is not B-minus-closed")
    return CheckResult(True)


def build_split_tail(g: Multigraph, c: EdgeColoring, ett: ETT, rungs: int | None = None,
                     seed: int | None = None) -> ETT:
    """Rebuild the tail after the last rung as a split tail satisfying R2.

    Reserved sets take the two smallest eligible colors.  The tail grows by
    TAA while any edge colored by a reserved set of a still-deficient
    connecting color is held back; when only held-back edges remain and the
    tree is not closed, one of them opens the next splitter and its reserved
    set is re-minted from colors missing on the latest layer.
    """
    n = ett.rungs if rungs is None else rungs
    records = ett.records[:n]
    rank = edge_rank(g.m, seed)
    if n == 0:
        e = ett.tree.edges[0]
        T = taa(c, TreeSeq.start(g, e), rank=rank)
        return ETT(T, (), SplitTail((0,), ({},)))
    base = ett.tree.prefix(records[-1].prefix)
    if not closure_report(c, base.vertices).closed:
        raise NotClosedError("T_n is not closed")
    deltas = sorted({r.delta for r in records})
    miss0 = missing_in(c, base.vertices)
    reserved: dict[int, tuple[int, int]] = {}
    taken = 0
    for d in deltas:
        if miss0 >> d & 1:
            continue
        pick = lowest_colors(miss0 & ~taken, 2)
        if len(pick) < 2:
            raise ReservedSetInfeasible(f"not enough colors missing on T_n to reserve for {d}", 0, d, base)
        reserved[d] = (pick[0], pick[1])
        taken |= (1 << pick[0]) | (1 << pick[1])
    positions = [len(base)]
    history = [dict(reserved)]
    T = _cross(g, base, records[-1].edge)

    while True:
        def blocked(edge, col, cur, _res=reserved):
            miss = missing_in(c, cur.vertices)
            return any(col in gam and not miss >> d & 1 for d, gam in _res.items())

        T = taa(c, T, rank=rank, blocked=blocked)
        report = closure_report(c, T.vertices)
        if report.closed:
            break
        miss = missing_in(c, T.vertices)
        D = {d for d in reserved if not miss >> d & 1}
        held = []
        for bd in boundary(g, T.vertices):
            col = c.colors[bd.edge]
            if col is None or not miss >> col & 1:
                continue
            owner = [d for d in sorted(D) if col in reserved[d]]
            if owner:
                held.append((rank[bd.edge], bd, owner[0], col))
        if not held:
            raise RuntimeError("tree is neither closed nor held back by a reserved set")
        _, bd, dh, col = min(held)
        stage = len(positions)
        layer = missing_in(c, T.vertices[positions[-1]:])
        others = 0
        for d in D:
            if d != dh:
                others |= (1 << reserved[d][0]) | (1 << reserved[d][1])
        pick = lowest_colors(layer & ~others & ~(1 << col), 2)
        if len(pick) < 2:
            raise ReservedSetInfeasible(f"not enough fresh colors to re-reserve for {dh}", stage, dh, T)
        reserved = {d: reserved[d] for d in sorted(D)}
        reserved[dh] = (pick[0], pick[1])
        positions.append(len(T))
        history.append(dict(reserved))
        T = T.extend(bd.edge, bd.out_end)
    return ETT(T, records, SplitTail(tuple(positions), tuple(history)))


# ---------------------------------------------------------------------------
# stability

@dataclass(frozen=True)
class StabilityReport:
    same_connecting_data: bool
    segments_unchanged: tuple[bool, ...]
    detail: str = ""

    @property
    def stable(self) -> bool:
        return self.same_connecting_data and all(self.segments_unchanged)

    def __bool__(self):
        return self.stable


def is_stable(g: Multigraph, c_old: EdgeColoring, c_new: EdgeColoring, ett: ETT) -> StabilityReport:
    """Whether ``c_new`` keeps the ETT, its connecting data and each rung's path segment."""
    from .verify import check_ett_definition
    tree = ett.tree
    same = True
    detail = ""
    ok = check_ett_definition(g, c_new, tree, ett.records)
    if not ok:
        same, detail = False, ok.detail
    for r in ett.records:
        if c_new.colors[r.edge] != c_old.colors[r.edge] or c_new.colors[r.edge] != r.delta:
            same, detail = False, f"connecting color of edge {r.edge} changed"
    segs = []
    for r in ett.records:
        inside = set(tree.vertices[:r.prefix])
        holders = [v for v in inside if c_new.missing_mask(v) >> r.gamma & 1]
        if len(holders) != 1:
            segs.append(False)
            continue
        path = trace_to_boundary(c_new, inside, holders[0], r.delta, r.gamma)
        segs.append(path == r.path and holders[0] == r.source)
    return StabilityReport(same, tuple(segs), detail)


# ---------------------------------------------------------------------------
# restart search standing in for the maximum property

def derive_seed(*parts) -> int:
    h = hashlib.blake2b(repr(parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big") >> 1


@dataclass(frozen=True)
class MPResult:
    ett: ETT
    coloring: EdgeColoring
    best_sizes: tuple[int, ...]
    history: tuple[tuple[int, ...], ...]   # best-so-far after each restart
    seeds: tuple[int, ...]

    def witness(self) -> dict:
        return {"budget": len(self.seeds), "seeds": list(self.seeds),
                "best_sequence": list(self.best_sizes),
                "history": [list(h) for h in self.history]}


def mp_search(g: Multigraph, e: int, k: int, budget: int, seed: int = 0,
              policy: ETTPolicy = ETTPolicy(), timeout: float | None = None) -> MPResult:
    """Best ETT over ``budget`` random k-triple colorings and TAA orders.

    Candidates compare by ``(|T_1|, ..., |T_n|, |T|)`` lexicographically.
    This is a search heuristic; nothing certifies a global maximum.
    """
    from .oracles import make_k_triple
    if budget < 1:
        raise ValueError("budget must be >= 1")
    best = None
    history = []
    seeds = []
    for r in range(budget):
        s = derive_seed(seed, e, r)
        seeds.append(s)
        col = make_k_triple(g, e, k, seed=s, check=False, timeout=timeout)
        pol = policy if r == 0 else replace(policy, seed=s)
        cand = build_ett(g, col, e, pol)
        if best is None or cand.sizes() > best[0].sizes():
            best = (cand, col)
        history.append(best[0].sizes())
    return MPResult(best[0], best[1], best[0].sizes(), tuple(history), tuple(seeds))


# ---------------------------------------------------------------------------
# simple ETTs and the tail inequalities

def build_sett(g: Multigraph, c: EdgeColoring, e: int, gamma: int, seed: int | None = None) -> ETT:
    """ETT whose rungs all use companion ``gamma``."""
    check_k_triple(g, c, e)
    rank = edge_rank(g.m, seed)
    T = TreeSeq.start(g, e)
    records: list[ConnectingRecord] = []
    while True:
        T = taa(c, T, rank=rank)
        choice = None
        for cand in find_connecting_edges(g, c, T):
            if cand.gamma != gamma:
                continue
            trial = records + [replace(cand, index=len(records) + 1)]
            if verify_r1(c, T, trial):
                choice = trial[-1]
                break
        if choice is None:
            return ETT(T, tuple(records))
        records.append(choice)
        T = _cross(g, T, choice.edge)


def modified_taa_tail(g: Multigraph, c: EdgeColoring, ett: ETT, seed: int | None = None) -> ETT:
    """Regrow the part after the last rung, preferring colors missing outside T_n."""
    rank = edge_rank(g.m, seed)
    n = ett.rungs
    if n == 0:
        start = TreeSeq.start(g, ett.tree.edges[0])
        base_size = 0
    else:
        base = ett.rung(n)
        base_size = len(base)
        start = _cross(g, base, ett.records[-1].edge)

    def key(edge, cur):
        outside = missing_in(c, cur.vertices[base_size:])
        return (0 if outside >> c.colors[edge] & 1 else 1, rank[edge])

    return ETT(taa(c, start, key=key), ett.records)


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: object
    rhs: object
    holds: bool

    def as_dict(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return f"{x.numerator}/{x.denominator}"
            if isinstance(x, (set, frozenset)):
                return sorted(x)
            return x
        return {"name": self.name, "lhs": enc(self.lhs), "rhs": enc(self.rhs), "holds": self.holds}


@dataclass(frozen=True)
class Main2aReport:
    ett: ETT
    chi: int
    max_degree: int
    multiplicity: int
    base_size: int
    tail_size: int
    base_missing: frozenset[int]
    tail_colors: frozenset[int]
    inequalities: tuple[Inequality, ...]
    graph_elementary: bool

    @property
    def hypothesis_met(self) -> bool:
        return (not self.graph_elementary) and self.chi >= self.max_degree + 2

    def as_dict(self) -> dict:
        return {"rungs": self.ett.rungs, "chi": self.chi, "max_degree": self.max_degree,
                "multiplicity": self.multiplicity, "base_size": self.base_size,
                "tail_size": self.tail_size, "graph_elementary": self.graph_elementary,
                "hypothesis_met": self.hypothesis_met,
                "inequalities": [q.as_dict() for q in self.inequalities]}


def tail_growth_bound(chi: int, delta: int, mu: int, exponent: int) -> Fraction:
    """``2 (1 + (chi - 1 - delta) / mu) ** exponent`` as an exact rational."""
    return 2 * (1 + Fraction(chi - 1 - delta, mu)) ** exponent


def sett_report(g: Multigraph, c: EdgeColoring, ett: ETT) -> Main2aReport:
    n = ett.rungs
    base = ett.rung(n)
    base_size = len(base)
    tail_size = len(ett.tree) - base_size
    base_missing = colors_of(missing_in(c, base.vertices))
    tail_colors = colors_of(tree_color_mask(c, ett.tree, start=base_size) if n else tree_color_mask(c, ett.tree))
    chi = c.k + 1
    delta, mu = g.max_degree(), g.max_multiplicity()
    growth = tail_growth_bound(chi, delta, mu, len(base_missing))
    ineqs = (
        Inequality("missing_on_base_used_in_tail", base_missing, tail_colors, base_missing <= tail_colors),
        Inequality("tail_at_least_twice_base_missing", tail_size, 2 * len(base_missing) + 2,
                   tail_size >= 2 * len(base_missing) + 2),
        Inequality("tail_exponential_growth", tail_size, growth, tail_size > growth),
    )
    elementary = verify_elementary(c, range(g.n)).ok
    return Main2aReport(ett, chi, delta, mu, base_size, tail_size, base_missing, tail_colors, ineqs, elementary)


def measure_sett(g: Multigraph, c: EdgeColoring, e: int, restarts: int = 4, seed: int = 0) -> Main2aReport:
    """Build the SETT with most rungs (over companions and TAA orders), regrow its
    tail by the modified TAA, and evaluate the three tail inequalities.

    The inequalities are claimed only for non-elementary graphs, so the holds
    flags are diagnostics; ``hypothesis_met`` says whether they apply.
    """
    check_k_triple(g, c, e)
    best = None
    for gamma in range(c.k):
        for r in range(restarts):
            s = None if r == 0 else derive_seed(seed, gamma, r)
            cand = build_sett(g, c, e, gamma, s)
            if best is None or cand.rungs > best.rungs:
                best = cand
    final = modified_taa_tail(g, c, best)
    return sett_report(g, c, final)
