"""Command line front end.  Exit codes: 0 pass, 1 violation, 2 usage/parse error, 3 timeout."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .bounds import guarantee_classifier
from .coloring import PreconditionError
from .ett import (NonElementaryError, ReservedSetInfeasible, build_split_tail, measure_sett, mp_search,
                  verify_r1, verify_r2)
from .multigraph import (GraphFormatError, emit_graph, enumerate_all, fat_cycle, parse_graph,
                         random_corpus, random_multigraph)
from .oracles import (NotColorableError, SearchTimeout, criticality_check, density, exact_chromatic_index,
                      make_k_triple)
from .tashkinov import build_maximal_tashkinov, closure_report

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timeout-ms", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)


def _graph_arg(p):
    p.add_argument("graph", help="graph file in the text format, or - for stdin")


def _triple_args(p):
    _graph_arg(p)
    p.add_argument("--edge", type=int, default=0, help="the uncolored edge")
    p.add_argument("--k", type=int, default=None, help="number of colors (default chi' - 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ettlab", description="multigraph edge-coloring laboratory")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate graphs")
    p.add_argument("family", choices=("fat-cycle", "random", "enumerate"))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--mults", default="2,2,2", help="fat-cycle multiplicities")
    p.add_argument("--mu-max", type=int, default=2)
    p.add_argument("--edges", type=int, default=None, help="random: edge budget")
    p.add_argument("--count", type=int, default=1)
    _common(p)

    for name, helptext in (("omega", "graph density"), ("chi", "exact chromatic index")):
        p = sub.add_parser(name, help=helptext)
        _graph_arg(p)
        _common(p)

    p = sub.add_parser("critical", help="edge-k-criticality check")
    _graph_arg(p)
    p.add_argument("--k", type=int, default=None)
    _common(p)

    for name, helptext in (("tashkinov", "maximal Tashkinov tree of a k-triple"),
                           ("ett", "extended Tashkinov tree with restart search"),
                           ("split-tail", "ETT with a split tail"),
                           ("measure-main2a", "simple ETT tail measurements")):
        p = sub.add_parser(name, help=helptext)
        _triple_args(p)
        if name == "ett":
            p.add_argument("--budget", type=int, default=1)
        _common(p)

    p = sub.add_parser("bounds", help="closed-form elementary criteria")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=39)
    _common(p)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("--corpus", required=True,
                   help="enumerate:N:MU | random:COUNT:N:MU[:SEED] | fat-cycle:N:m1,.. | file:PATH")
    p.add_argument("--checks", default="goldberg,oracle-sandwich",
                   help="comma list from " + ",".join(harness.ALL_CHECKS) + " or 'all'")
    p.add_argument("--cert-dir", default=None, help="write violation certificates here")
    _common(p)

    p = sub.add_parser("revalidate", help="re-check a certificate")
    p.add_argument("certificate")
    _common(p)
    return ap


def _read_graph(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_graph(text)


def _timeout(args):
    return None if args.timeout_ms is None else args.timeout_ms / 1000


def _triple(args):
    g = _read_graph(args.graph)
    if not 0 <= args.edge < g.m:
        raise UsageError(f"edge {args.edge} out of range")
    k = args.k
    if k is None:
        res = exact_chromatic_index(g, _timeout(args))
        if not res.exact:
            raise SearchTimeout()
        k = res.chi - 1
    c = make_k_triple(g, args.edge, k, seed=args.seed, check=False, timeout=_timeout(args))
    return g, c


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, sort_keys=True, indent=2) + "\n" if args.format == "json" else text.rstrip() + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _cmd_gen(args):
    if args.family == "fat-cycle":
        mults = [int(x) for x in args.mults.split(",")]
        graphs = [fat_cycle(args.n, mults)]
    elif args.family == "random":
        if args.edges is None:
            graphs = list(random_corpus(args.count, args.n, args.mu_max, args.seed))
        else:
            graphs = [random_multigraph(args.n, args.mu_max, args.edges, args.seed + i) for i in range(args.count)]
    else:
        graphs = list(enumerate_all(args.n, args.mu_max))
    payload = {"graphs": [{"n": g.n, "edges": [list(e) for e in g.edges]} for g in graphs]}
    _emit(args, payload, "\n".join(emit_graph(g) for g in graphs))
    return EXIT_OK


def _cmd_omega(args):
    g = _read_graph(args.graph)
    val, wit = density(g, _timeout(args))
    _emit(args, {"omega": val, "witness": list(wit.vertices), "edges": wit.edge_count},
          f"omega {val}\nwitness {' '.join(map(str, wit.vertices))}")
    return EXIT_OK


def _cmd_chi(args):
    g = _read_graph(args.graph)
    res = exact_chromatic_index(g, _timeout(args))
    payload = {"chi": res.chi, "exact": res.exact, "lower": res.lower, "upper": res.upper,
               "omega": res.omega, "coloring": None if res.coloring is None else list(res.coloring.colors)}
    if not res.exact:
        _emit(args, payload, f"timeout: chi in [{res.lower}, {res.upper}]")
        return EXIT_TIMEOUT
    _emit(args, payload, f"chi {res.chi}\nomega {res.omega}\ncoloring {' '.join(map(str, res.coloring.colors))}")
    return EXIT_OK


def _cmd_critical(args):
    g = _read_graph(args.graph)
    k = args.k
    if k is None:
        res = exact_chromatic_index(g, _timeout(args))
        if not res.exact:
            raise SearchTimeout()
        k = res.chi - 1
    rep = criticality_check(g, k, _timeout(args))
    _emit(args, {"k": k, "is_critical": rep.is_critical, "chi": rep.chi,
                 "per_edge_chi": list(rep.per_edge_chi), "reason": rep.reason},
          f"k {k}\ncritical {str(rep.is_critical).lower()}" + (f"\nreason {rep.reason}" if rep.reason else ""))
    return EXIT_OK


def _cmd_tashkinov(args):
    g, c = _triple(args)
    T = build_maximal_tashkinov(g, c, args.edge)
    flags = closure_report(c, T.vertices)
    payload = {"k": c.k, "coloring": list(c.colors), "sequence": T.sequence(), "flags": flags.as_dict()}
    _emit(args, payload, f"tree {' '.join(map(str, T.sequence()))}\n"
                         + "\n".join(f"{k} {str(v).lower()}" for k, v in flags.as_dict().items()))
    return EXIT_OK if flags.elementary and flags.closed else EXIT_VIOLATION


def _cmd_ett(args):
    g = _read_graph(args.graph)
    if not 0 <= args.edge < g.m:
        raise UsageError(f"edge {args.edge} out of range")
    k = args.k
    if k is None:
        k = exact_chromatic_index(g, _timeout(args)).chi - 1
    res = mp_search(g, args.edge, k, args.budget, seed=args.seed, timeout=_timeout(args))
    c = res.coloring
    r1 = bool(verify_r1(c, res.ett.tree, res.ett.records))
    elem = closure_report(c, res.ett.tree.vertices).elementary
    payload = {**res.ett.as_dict(), "k": k, "coloring": list(c.colors), "r1": r1, "elementary": elem,
               "mp_witness": res.witness()}
    _emit(args, payload, f"tree {' '.join(map(str, res.ett.tree.sequence()))}\nrungs {res.ett.rungs}\n"
                         f"r1 {str(r1).lower()}\nelementary {str(elem).lower()}")
    return EXIT_VIOLATION if r1 and not elem else EXIT_OK


def _cmd_split_tail(args):
    g, c = _triple(args)
    from .ett import build_ett
    ett = build_ett(g, c, args.edge)
    split = build_split_tail(g, c, ett)
    r2 = verify_r2(g, c, split)
    elem = closure_report(c, split.tree.vertices).elementary
    payload = {**split.as_dict(), "k": c.k, "coloring": list(c.colors), "r2": bool(r2),
               "r2_detail": r2.detail, "elementary": elem}
    _emit(args, payload, f"tree {' '.join(map(str, split.tree.sequence()))}\n"
                         f"splitters {' '.join(map(str, split.split.positions))}\n"
                         f"r2 {str(bool(r2)).lower()}\nelementary {str(elem).lower()}")
    return EXIT_OK if r2 and elem else EXIT_VIOLATION


def _cmd_main2a(args):
    g, c = _triple(args)
    rep = measure_sett(g, c, args.edge, seed=args.seed)
    payload = {**rep.as_dict(), "sett": rep.ett.as_dict()}
    lines = [f"rungs {rep.ett.rungs}", f"graph_elementary {str(rep.graph_elementary).lower()}",
             f"hypothesis_met {str(rep.hypothesis_met).lower()}"]
    for q in rep.inequalities:
        d = q.as_dict()
        lines.append(f"{d['name']}: lhs={d['lhs']} rhs={d['rhs']} holds={str(d['holds']).lower()}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _cmd_bounds(args):
    rep = guarantee_classifier(args.delta, args.mu, args.chi, args.n, args.m)
    lines = [f"{'criterion':<22} {'holds':<6} {'guaranteed':<10} threshold"]
    for v in rep.verdicts:
        d = v.as_dict()
        th = d["threshold"] if not isinstance(d["threshold"], list) else f"~{float(v.threshold[1]):.6f}"
        lines.append(f"{v.name:<22} {str(v.inequality_holds).lower():<6} {str(v.guaranteed).lower():<10} {th}")
    lines.append(f"guaranteed elementary: {str(rep.guaranteed).lower()}")
    _emit(args, rep.as_dict(), "\n".join(lines))
    return EXIT_OK


def _cmd_verify(args):
    checks = harness.ALL_CHECKS if args.checks == "all" else tuple(x for x in args.checks.split(",") if x)
    try:
        corpus = harness.CorpusSpec.parse(args.corpus)
        report, certs = harness.run_campaign(corpus, checks, args.jobs, args.seed, _timeout(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.cert_dir:
        d = Path(args.cert_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i, cert in enumerate(certs):
            harness.emit_certificate(cert, d / f"violation-{i}.cert.json")
    t = report.tallies
    text = (f"corpus {report.corpus}\ninstances {report.instances}\n"
            f"chi=delta {t['delta']}  chi=delta+1 {t['delta+1']}  chi>=delta+2 {t['delta+2+']}  timeout {t['timeout']}\n"
            f"goldberg_violations {len(report.goldberg_violations)}\n"
            f"theorem_violations {len(report.theorem_violations)}\n"
            f"other_violations {len(report.other_violations)}")
    out = report.to_json() if args.format == "json" else text + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    if not report.clean:
        return EXIT_VIOLATION
    return EXIT_TIMEOUT if report.timeouts else EXIT_OK


def _cmd_revalidate(args):
    res = harness.revalidate_certificate(args.certificate, _timeout(args))
    _emit(args, {"ok": res.ok, "failures": list(res.failures)},
          "ok" if res.ok else "FAILED: " + res.first_failure)
    return EXIT_OK if res.ok else EXIT_VIOLATION


COMMANDS = {"gen": _cmd_gen, "omega": _cmd_omega, "chi": _cmd_chi, "critical": _cmd_critical,
            "tashkinov": _cmd_tashkinov, "ett": _cmd_ett, "split-tail": _cmd_split_tail,
            "measure-main2a": _cmd_main2a, "bounds": _cmd_bounds, "verify": _cmd_verify,
            "revalidate": _cmd_revalidate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except SearchTimeout:
        print("timeout", file=sys.stderr)
        return EXIT_TIMEOUT
    except (GraphFormatError, UsageError, PreconditionError, NotColorableError,
            FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonElementaryError, ReservedSetInfeasible) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
