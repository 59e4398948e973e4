"""Campaign runner, certificates and their re-validation."""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import verify
from .bounds import guarantee_classifier
from .coloring import EdgeColoring
from .ett import (ETT, NonElementaryError, ReservedSetInfeasible, build_ett, build_split_tail,
                  derive_seed, measure_sett, sett_report, verify_r1, verify_r2)
from .multigraph import (Multigraph, canonical_form, enumerate_all, fat_cycle, parse_graphs,
                         random_corpus)
from .oracles import (SearchTimeout, critical_core, criticality_check, density, density_value,
                      exact_chromatic_index, make_k_triple, near_perfect_decomposition)
from .tashkinov import TreeSeq, build_maximal_tashkinov, closure_report

SCHEMA = "ettlab-certificate"
VERSION = 1
ALL_CHECKS = ("goldberg", "oracle-sandwich", "tashkinov-elementary", "ett-elementary", "near-perfect")


# ---------------------------------------------------------------------------
# corpus specs

@dataclass(frozen=True)
class CorpusSpec:
    """``enumerate:N:MU``, ``random:COUNT:N:MU[:SEED]``, ``fat-cycle:N:m1,m2,...`` or ``file:PATH``."""

    kind: str
    params: tuple

    @classmethod
    def parse(cls, text: str) -> "CorpusSpec":
        kind, _, rest = text.partition(":")
        parts = rest.split(":") if rest else []
        try:
            if kind == "enumerate" and len(parts) == 2:
                return cls(kind, (int(parts[0]), int(parts[1])))
            if kind == "random" and len(parts) in (3, 4):
                vals = [int(p) for p in parts] + ([0] if len(parts) == 3 else [])
                return cls(kind, tuple(vals))
            if kind == "fat-cycle" and len(parts) == 2:
                return cls(kind, (int(parts[0]), tuple(int(x) for x in parts[1].split(","))))
            if kind == "file" and len(parts) >= 1:
                return cls(kind, (":".join(parts),))
            if kind == "empty" and not parts:
                return cls(kind, ())
        except ValueError as exc:
            raise ValueError(f"bad corpus spec {text!r}: {exc}") from None
        raise ValueError(f"bad corpus spec {text!r}")

    def describe(self) -> str:
        if self.kind == "fat-cycle":
            return f"fat-cycle:{self.params[0]}:{','.join(map(str, self.params[1]))}"
        return ":".join([self.kind, *map(str, self.params)])

    def graphs(self) -> list[Multigraph]:
        if self.kind == "enumerate":
            return list(enumerate_all(*self.params))
        if self.kind == "random":
            count, n, mu, seed = self.params
            return list(random_corpus(count, n, mu, seed))
        if self.kind == "fat-cycle":
            return [fat_cycle(self.params[0], self.params[1])]
        if self.kind == "file":
            return parse_graphs(Path(self.params[0]).read_text())
        return []


def instance_seed(seed: int, index: int, g: Multigraph) -> int:
    form = canonical_form(g) if g.n <= 8 else (g.n, tuple(g.edges))
    h = hashlib.blake2b(repr((seed, index, form)).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big") >> 1


# ---------------------------------------------------------------------------
# certificates

def _graph_json(g: Multigraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def _graph_from_json(d: dict) -> Multigraph:
    return Multigraph(int(d["n"]), [tuple(e) for e in d["edges"]])


def chi_class(delta: int, chi: int | None) -> str:
    if chi is None:
        return "timeout"
    if chi == delta:
        return "delta"
    if chi == delta + 1:
        return "delta+1"
    return "delta+2+"


@dataclass
class Instance:
    """Everything computed for one graph; ``certificate()`` serializes it."""

    graph: Multigraph
    seed: int
    checks: tuple[str, ...]
    omega: int | None = None
    omega_witness: tuple[int, ...] = ()
    chi: int | None = None
    chi_exact: bool = False
    chi_coloring: list | None = None
    criticality: dict | None = None
    triples: list = field(default_factory=list)
    near_perfect: dict | None = None
    violations: list = field(default_factory=list)
    timed_out: bool = False
    elapsed_ms: int = 0

    def certificate(self) -> dict:
        g = self.graph
        st = g.stats()
        cert = {
            "schema": SCHEMA,
            "version": VERSION,
            "graph": _graph_json(g),
            "stats": st.as_dict(),
            "seeds": {"instance": self.seed},
            "checks": list(self.checks),
            "omega": None if self.omega is None else {"value": self.omega, "witness": list(self.omega_witness)},
            "chi": None if self.chi is None else {"value": self.chi, "exact": self.chi_exact,
                                                   "coloring": self.chi_coloring},
            "criticality": self.criticality,
            "triples": self.triples,
            "near_perfect": self.near_perfect,
            "verdicts": {"violations": list(self.violations), "timed_out": self.timed_out},
            "bounds": None,
            "timing": {"elapsed_ms": self.elapsed_ms},
        }
        if self.chi is not None:
            cert["bounds"] = guarantee_classifier(st.max_degree, st.multiplicity, self.chi, g.n).as_dict()
        return cert


def _triple_payload(core: Multigraph, c: EdgeColoring, e: int, do_ett: bool) -> tuple[dict, list[str]]:
    """Tashkinov/ETT payloads for one k-triple and the violations found."""
    issues = []
    T = build_maximal_tashkinov(core, c, e)
    flags = closure_report(c, T.vertices)
    payload = {"edge": e, "k": c.k, "coloring": list(c.colors),
               "tashkinov": {"sequence": T.sequence(), "flags": flags.as_dict(), "order": len(T)}}
    if not flags.elementary:
        issues.append(f"tashkinov tree not elementary (edge {e})")
    if not flags.closed:
        issues.append(f"tashkinov tree not closed (edge {e})")
    if len(T) % 2 == 0:
        issues.append(f"tashkinov tree has even order (edge {e})")
    if not do_ett:
        return payload, issues
    try:
        ett = build_ett(core, c, e)
        r1 = bool(verify_r1(c, ett.tree, ett.records))
        elem = verify.check_elementary(core, c.colors, c.k, ett.tree.vertices).ok
        payload["ett"] = {**ett.as_dict(), "r1": r1, "elementary": elem}
        if r1 and not elem:
            issues.append(f"R1 ETT not elementary (edge {e})")
        split = build_split_tail(core, c, ett)
        r2 = bool(verify_r2(core, c, split))
        elem2 = verify.check_elementary(core, c.colors, c.k, split.tree.vertices).ok
        payload["split_ett"] = {**split.as_dict(), "r1": bool(verify_r1(c, split.tree, split.records)),
                                "r2": r2, "elementary": elem2}
        if not r2:
            issues.append(f"split tail fails R2 (edge {e})")
        elif not elem2:
            issues.append(f"R2 ETT not elementary (edge {e})")
        rep = measure_sett(core, c, e, restarts=1)
        payload["tail_report"] = {"sett": rep.ett.as_dict(), **rep.as_dict()}
    except NonElementaryError as exc:
        issues.append(f"non-elementary tree during ETT growth (edge {e}): witness {list(exc.witness)}")
    except ReservedSetInfeasible as exc:
        issues.append(f"reserved set infeasible at stage {exc.stage} for color {exc.delta} (edge {e})")
    return payload, issues


def check_instance(g: Multigraph, checks: Sequence[str], seed: int, timeout: float | None = None,
                   triples_per_core: int | None = None) -> Instance:
    start = time.monotonic()
    inst = Instance(g, seed, tuple(checks))
    try:
        _run_checks(inst, triples_per_core, timeout)
    except SearchTimeout:
        inst.timed_out = True
    inst.elapsed_ms = int(1000 * (time.monotonic() - start))
    return inst


def _run_checks(inst: Instance, triples_per_core: int | None, timeout: float | None) -> None:
    g, checks = inst.graph, inst.checks
    if g.m == 0 or g.n < 2:
        return
    delta, mu = g.max_degree(), g.max_multiplicity()
    omega, wit = density(g)
    inst.omega, inst.omega_witness = omega, wit.vertices
    res = exact_chromatic_index(g, timeout)
    if not res.exact:
        raise SearchTimeout()
    inst.chi, inst.chi_exact, inst.chi_coloring = res.chi, True, list(res.coloring.colors)
    chi = res.chi
    if "oracle-sandwich" in checks and not (omega <= chi <= delta + mu and chi >= delta):
        inst.violations.append(f"sandwich: omega={omega} chi={chi} delta={delta} mu={mu}")
    if "goldberg" in checks and chi >= delta + 2 and chi != omega:
        inst.violations.append(f"goldberg: chi={chi} >= delta+2 but omega={omega}")
    deep = {"tashkinov-elementary", "ett-elementary", "near-perfect"} & set(checks)
    if not deep or chi < delta + 2:
        return
    core = critical_core(g, chi, timeout)
    cg = core.graph
    k = chi - 1
    inst.criticality = {"k": k, "edge_map": list(core.edge_map), "vertex_map": list(core.vertex_map),
                        "core": _graph_json(cg)}
    if k < cg.max_degree() + 1:
        return
    edges = range(cg.m) if triples_per_core is None else range(min(cg.m, triples_per_core))
    if {"tashkinov-elementary", "ett-elementary"} & set(checks):
        for e in edges:
            c = make_k_triple(cg, e, k, seed=derive_seed(inst.seed, e), check=False, timeout=timeout)
            payload, issues = _triple_payload(cg, c, e, "ett-elementary" in checks)
            inst.triples.append(payload)
            inst.violations.extend(issues)
    if "near-perfect" in checks:
        if cg.n % 2 == 0:
            inst.violations.append("near-perfect: critical core has even order")
        else:
            npd = near_perfect_decomposition(cg, 0, k, timeout)
            inst.near_perfect = {"edge": 0, "k": k, "found": npd.found,
                                 "coloring": None if npd.coloring is None else list(npd.coloring.colors)}
            if not npd.found:
                inst.violations.append(f"near-perfect: {npd.reason}")


# ---------------------------------------------------------------------------
# revalidation

_TOP = {"schema", "version", "graph", "stats", "seeds", "checks", "omega", "chi", "criticality",
        "triples", "near_perfect", "verdicts", "bounds", "timing"}
_TRIPLE = {"edge", "k", "coloring", "tashkinov", "ett", "split_ett", "tail_report"}
_ETT = {"sequence", "ladder", "connecting", "split_tail", "r1", "r2", "elementary"}


@dataclass(frozen=True)
class Revalidation:
    ok: bool
    failures: tuple[str, ...] = ()

    @property
    def first_failure(self) -> str | None:
        return self.failures[0] if self.failures else None

    def __bool__(self):
        return self.ok


class _Fail(Exception):
    pass


def revalidate_certificate(cert: dict | str | Path, timeout: float | None = None) -> Revalidation:
    """Re-derive every flag of a certificate from its graph and payloads."""
    try:
        if isinstance(cert, (str, Path)):
            cert = json.loads(Path(cert).read_text())
        failures = list(_revalidate(cert, timeout))
    except _Fail as exc:
        failures = [str(exc)]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        failures = [f"schema: malformed certificate ({type(exc).__name__}: {exc})"]
    return Revalidation(not failures, tuple(failures))


def _require_keys(d: dict, allowed: set, where: str):
    if not isinstance(d, dict):
        raise _Fail(f"schema: {where} must be an object")
    extra = set(d) - allowed
    if extra:
        raise _Fail(f"schema: unknown field(s) {sorted(extra)} in {where}")


def _revalidate(cert: dict, timeout):
    _require_keys(cert, _TOP, "certificate")
    if cert.get("schema") != SCHEMA or cert.get("version") != VERSION:
        raise _Fail("schema: unsupported schema or version")
    missing = _TOP - set(cert)
    if missing:
        raise _Fail(f"schema: missing field(s) {sorted(missing)}")
    g = _graph_from_json(cert["graph"])
    if cert["stats"] != g.stats().as_dict():
        yield "stats: do not match graph"
    violations = []
    om = cert["omega"]
    omega = None
    if om is not None:
        omega = om["value"]
        val, _ = density_value(g, om["witness"])
        if val != omega:
            yield "omega: witness does not attain the stated value"
        if density(g)[0] != omega:
            yield "omega: value is not the maximum"
    ch = cert["chi"]
    chi = None
    delta, mu = g.max_degree(), g.max_multiplicity()
    if ch is not None:
        chi = ch["value"]
        if not verify.check_proper(g, ch["coloring"], chi) or None in ch["coloring"]:
            yield "chi: coloring witness is not a proper complete coloring"
        if ch["exact"]:
            res = exact_chromatic_index(g, timeout)
            if res.exact and res.chi != chi:
                yield f"chi: stated {chi}, oracle gives {res.chi}"
        if omega is not None and not (omega <= chi <= delta + mu and chi >= delta):
            violations.append(f"sandwich: omega={omega} chi={chi} delta={delta} mu={mu}")
        if omega is not None and chi >= delta + 2 and chi != omega:
            violations.append(f"goldberg: chi={chi} >= delta+2 but omega={omega}")
        if cert["bounds"] != guarantee_classifier(delta, mu, chi, g.n).as_dict():
            yield "bounds: verdicts do not reproduce"
    core = g
    crit = cert["criticality"]
    if crit is not None:
        _require_keys(crit, {"k", "edge_map", "vertex_map", "core"}, "criticality")
        core = _graph_from_json(crit["core"])
        kept = [g.edges[i] for i in crit["edge_map"]]
        vmap = crit["vertex_map"]
        relabeled = [tuple(sorted((vmap[a], vmap[b]))) for a, b in core.edges]
        if sorted(tuple(sorted(e)) for e in kept) != sorted(relabeled):
            yield "criticality: core is not the stated subgraph"
        rep = criticality_check(core, crit["k"], timeout)
        if not rep.is_critical:
            yield f"criticality: core is not edge-{crit['k']}-critical ({rep.reason})"
    for i, tr in enumerate(cert["triples"]):
        yield from _revalidate_triple(core, tr, i, violations)
    npd = cert["near_perfect"]
    if npd is not None:
        k = npd["k"]
        if npd["found"]:
            cols = npd["coloring"]
            if not verify.check_proper(core, cols, k) or cols[npd["edge"]] is not None:
                yield "near_perfect: coloring is not a proper coloring of G - e"
            else:
                for col in range(k):
                    covered = {v for j, x in enumerate(cols) if x == col for v in core.edges[j]}
                    if len(covered) != core.n - 1:
                        yield f"near_perfect: color class {col} is not near-perfect"
                        break
        else:
            violations.append("near-perfect: decomposition not found")
    if sorted(cert["verdicts"]["violations"]) != sorted(violations) and not cert["verdicts"]["timed_out"]:
        yield "verdicts: violation list does not reproduce"


def _revalidate_triple(core: Multigraph, tr: dict, i: int, violations: list):
    _require_keys(tr, _TRIPLE, f"triples[{i}]")
    k, e, cols = tr["k"], tr["edge"], tr["coloring"]
    where = f"triples[{i}]"
    if (not verify.check_proper(core, cols, k) or cols[e] is not None
            or sum(x is None for x in cols) != 1):
        yield f"{where}: coloring is not a proper coloring of G - e"
        return
    c = EdgeColoring(core, k, cols)
    ts = tr["tashkinov"]
    T = TreeSeq.from_sequence(ts["sequence"])
    if T.edges[0] != e or not verify.check_tashkinov(core, cols, k, T.vertices, T.edges):
        yield f"{where}: tashkinov sequence fails the definition"
    elem = verify.check_elementary(core, cols, k, T.vertices).ok
    closed = verify.check_closed(core, cols, k, T.vertices).ok
    if ts["flags"]["elementary"] != elem or ts["flags"]["closed"] != closed:
        yield f"{where}: tashkinov flags do not reproduce"
    if not elem:
        violations.append(f"tashkinov tree not elementary (edge {e})")
    if not closed:
        violations.append(f"tashkinov tree not closed (edge {e})")
    if len(T) % 2 == 0:
        violations.append(f"tashkinov tree has even order (edge {e})")
    for key in ("ett", "split_ett"):
        if key not in tr:
            continue
        d = tr[key]
        _require_keys(d, _ETT, f"{where}.{key}")
        ett = ETT.from_dict(d)
        if ett.tree.edges[0] != e or not verify.check_ett_definition(core, c, ett.tree, ett.records):
            yield f"{where}.{key}: sequence fails the ETT definition"
        r1 = bool(verify_r1(c, ett.tree, ett.records))
        el = verify.check_elementary(core, cols, k, ett.tree.vertices).ok
        if d["r1"] != r1 or d["elementary"] != el:
            yield f"{where}.{key}: r1/elementary flags do not reproduce"
        if key == "ett" and r1 and not el:
            violations.append(f"R1 ETT not elementary (edge {e})")
        if key == "split_ett":
            r2 = bool(verify_r2(core, c, ett))
            if d["r2"] != r2:
                yield f"{where}.split_ett: r2 flag does not reproduce"
            if not r2:
                violations.append(f"split tail fails R2 (edge {e})")
            elif not el:
                violations.append(f"R2 ETT not elementary (edge {e})")
    if "tail_report" in tr:
        m = dict(tr["tail_report"])
        sett = ETT.from_dict({**m.pop("sett"), "split_tail": None})
        if not verify.check_ett_definition(core, c, sett.tree, sett.records):
            yield f"{where}.tail_report: SETT fails the ETT definition"
        if len({r.gamma for r in sett.records}) > 1:
            yield f"{where}.tail_report: companions differ"
        if sett_report(core, c, sett).as_dict() != m:
            yield f"{where}.tail_report: measurements do not reproduce"


# ---------------------------------------------------------------------------
# campaigns

@dataclass
class CampaignReport:
    corpus: str
    checks: tuple[str, ...]
    seed: int
    instances: int
    tallies: dict
    goldberg_violations: list
    theorem_violations: list
    other_violations: list
    timeouts: list
    triples_checked: int
    elapsed: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        d = {"corpus": self.corpus, "checks": list(self.checks), "seed": self.seed,
             "instances": self.instances, "tallies": self.tallies,
             "goldberg_violations": self.goldberg_violations,
             "theorem_violations": self.theorem_violations,
             "other_violations": self.other_violations,
             "timeouts": self.timeouts, "triples_checked": self.triples_checked}
        if timing:
            d["elapsed"] = self.elapsed
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2) + "\n"

    @property
    def clean(self) -> bool:
        return not (self.goldberg_violations or self.theorem_violations or self.other_violations)


def _work(args):
    index, n, edges, checks, seed, timeout, per_core = args
    g = Multigraph(n, [tuple(e) for e in edges])
    inst = check_instance(g, checks, seed, timeout, per_core)
    cert = inst.certificate() if inst.violations else None
    return index, chi_class(g.max_degree(), inst.chi), inst.timed_out, list(inst.violations), len(inst.triples), cert


def run_campaign(corpus: CorpusSpec | str | Iterable[Multigraph], checks: Sequence[str] = ("goldberg",),
                 jobs: int = 1, seed: int = 0, timeout: float | None = None,
                 triples_per_core: int | None = None) -> tuple[CampaignReport, list[dict]]:
    """Run the selected checks over a corpus; returns the report and violation certificates."""
    start = time.monotonic()
    if isinstance(corpus, str):
        corpus = CorpusSpec.parse(corpus)
    if isinstance(corpus, CorpusSpec):
        name, graphs = corpus.describe(), corpus.graphs()
    else:
        graphs = list(corpus)
        name = f"explicit:{len(graphs)}"
    bad = set(checks) - set(ALL_CHECKS)
    if bad:
        raise ValueError(f"unknown checks {sorted(bad)}")
    checks = tuple(c for c in ALL_CHECKS if c in checks)
    tasks = [(i, g.n, [list(e) for e in g.edges], checks, instance_seed(seed, i, g), timeout, triples_per_core)
             for i, g in enumerate(graphs)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_work, tasks, chunksize=max(1, len(tasks) // (jobs * 8))))
    else:
        results = [_work(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    tallies = {"delta": 0, "delta+1": 0, "delta+2+": 0, "timeout": 0}
    gold, theo, other, tos, certs = [], [], [], [], []
    triples = 0
    for index, cls, timed_out, violations, nt, cert in results:
        tallies[cls] += 1
        triples += nt
        if timed_out:
            tos.append(index)
        for v in violations:
            entry = {"index": index, "violation": v}
            if v.startswith("goldberg"):
                gold.append(entry)
            elif v.startswith(("sandwich", "near-perfect")):
                other.append(entry)
            else:
                theo.append(entry)
        if cert is not None:
            certs.append(cert)
    report = CampaignReport(name, checks, seed, len(graphs), tallies, gold, theo, other, tos, triples,
                            time.monotonic() - start)
    return report, certs


def emit_certificate(cert: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cert, sort_keys=True, indent=1) + "\n")
