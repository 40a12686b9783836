"""Command-line interface.

Exit codes: 0 success, 1 usage, 2 parse/validation, 3 solver failure or
timeout, 4 verification failed (a kill chain remains).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import bench, dot, qubo
from .dual import build_dual
from .errors import (
    ExactTimeout, InputError, InvalidCoverError, ParameterError, ParseError,
    SolverError, TheoremViolation, ValidationError, DomainError,
)
from .graph import find_killchain, vuln
from .ingest import make_patch_plan, parse_scan_report
from .solvers import (
    AnnealParams, Method, decode, sample_annealing, solve_brute_force, solve_exact,
    solve_greedy,
)
from .verify import verify_remediation

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SOLVER, EXIT_KILLCHAIN = 0, 1, 2, 3, 4

log = logging.getLogger("vulngraph")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _load(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc.strerror}") from None
    return parse_scan_report(data).to_graph()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _emit_json(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _anneal_params(args) -> AnnealParams:
    return AnnealParams(num_reads=args.reads, num_sweeps=args.sweeps,
                        t_initial=args.t_initial, t_final=args.t_final, seed=args.seed)


def _encode(d, args):
    if args.bias:
        return qubo.encode_weighted_mvc(d, args.penalty, args.bias)
    return qubo.encode_mvc(d, args.penalty)


def _solve(d, method, args):
    """Return ``(cover, extra)`` where extra carries sampler statistics."""
    if method == "exact":
        return solve_exact(d, time_budget=args.time_budget), {}
    if method == "greedy":
        return solve_greedy(d), {}
    q = _encode(d, args)
    if method == "brute":
        bits, e = solve_brute_force(q)
        return decode(q, bits, d, Method.BRUTE_FORCE), {"energy": e}
    ss = sample_annealing(q, _anneal_params(args))
    covers = [(decode(q, s.bits, d, Method.ANNEALING, ss.solve_time_us), s) for s in ss.samples]
    invalid = sum(s.count for c, s in covers if not c.valid)
    return covers[0][0], {"energy": ss.first.energy, "invalid_count": invalid,
                          "num_reads": ss.num_reads}


# -- subcommands ------------------------------------------------------------

def cmd_ingest(args):
    g = _load(args.file)
    d = build_dual(g)
    chain = find_killchain(g)
    info = {
        "hosts": len(g.hosts), "vulns": len(g.vulns), "edges": len(g.edges),
        "dual_edges": d.n_edges, "killchain_present": chain is not None,
    }
    if args.dot:
        _write(args.dot, dot.graph_to_dot(g))
    if args.json:
        _emit_json(info)
    else:
        for k, v in info.items():
            print(f"{k}: {str(v).lower() if isinstance(v, bool) else v}")
    return EXIT_OK


def cmd_dual(args):
    g = _load(args.file)
    d = build_dual(g)
    if args.dot:
        _write(args.dot, dot.dual_to_dot(d))
    if args.dot != "-":
        for (u, v), w in d.weights.items():
            print(f"{u.label}\t{v.label}\t{w}")
    return EXIT_OK


def cmd_solve(args):
    g = _load(args.file)
    d = build_dual(g)
    cover, extra = _solve(d, args.method, args)
    out = {"method": cover.method.value, "size": cover.size, "valid": cover.valid,
           "cover": cover.labels(), **extra, "solve_time_us": round(cover.solve_time_us)}
    if args.json:
        _emit_json(out)
    else:
        print(f"method: {out['method']}")
        print(f"size: {cover.size}")
        print(f"valid: {str(cover.valid).lower()}")
        print("cover: " + ",".join(cover.labels()))
        for k, v in extra.items():
            print(f"{k}: {v}")
    return EXIT_OK if cover.valid else EXIT_SOLVER


def cmd_plan(args):
    g = _load(args.file)
    d = build_dual(g)
    method = args.method
    if method is None:
        method = "anneal" if len(d.vertices) > args.threshold else "exact"
    cover, _ = _solve(d, method, args)
    if not cover.valid:
        raise _Fail(EXIT_SOLVER, f"{method} produced an invalid cover; try more reads or sweeps")
    plan = make_patch_plan(g, cover, d)
    if args.json:
        _emit_json({"method": method, **plan.to_dict()})
    else:
        print(f"{'rank':>4}  {'vuln':<24} {'weight':>8} {'strength':>8} {'hosts':>5}")
        for i, e in enumerate(plan.entries, 1):
            print(f"{i:>4}  {e.vuln:<24} {e.weight:>8.3f} {e.strength:>8} {e.hosts_affected:>5}")
        print(f"kill-chain free after patching: {str(plan.killchain_free).lower()}")
    return EXIT_OK if plan.killchain_free else EXIT_KILLCHAIN


def cmd_verify(args):
    g = _load(args.file)
    labels = [s.strip() for s in args.patched.split(",") if s.strip()]
    report = verify_remediation(g, [vuln(s) for s in labels])
    out = {
        "patched": sorted(labels),
        "killchain_free": report.killchain_free,
        "residual_edges": report.residual_edge_count,
    }
    if report.witness is not None:
        w = report.witness
        out["witness"] = {"vulns": [v.label for v in w.vulns], "hosts": [h.label for h in w.witnesses]}
    if args.json:
        _emit_json(out)
    else:
        print(f"killchain_free: {str(report.killchain_free).lower()}")
        print(f"residual_edges: {report.residual_edge_count}")
        if "witness" in out:
            a, b = out["witness"]["vulns"]
            print(f"witness: {a} -[{out['witness']['hosts'][0]}]- {b}")
    return EXIT_OK if report.killchain_free else EXIT_KILLCHAIN


def cmd_bench(args):
    if args.min > args.max:
        raise _Fail(EXIT_USAGE, "--min must not exceed --max")
    cfg = bench.BenchConfig(
        vuln_counts=range(args.min, args.max + 1),
        edge_probs=args.probs,
        trials=args.trials,
        seed=args.seed,
        anneal=_anneal_params(args),
        penalty=args.penalty,
        hosts_per_vuln=args.hosts_per_vuln,
        exact_time_budget=args.time_budget,
        classical=args.classical,
    )

    def progress(r):
        if args.verbose:
            print(f"n={r.n_vulns} p={r.edge_prob:g} trial={r.trial} "
                  f"exact={r.exact_size} sample={r.best_sample_size}", file=sys.stderr)

    records = bench.run_benchmark(cfg, progress)
    _write(args.out, bench.records_to_csv(records))
    rows = bench.summarize(records)
    if args.summary:
        _write(args.summary, bench.summary_to_csv(rows))
    if args.plot_data:
        bench.write_plot_data(rows, args.plot_data)
    return EXIT_OK


def cmd_export_qubo(args):
    g = _load(args.file)
    q = _encode(build_dual(g), args)
    _write(args.out, qubo.dumps(q))
    if args.labels:
        _write(args.labels, "".join(f"{i}\t{v.label}\n" for i, v in enumerate(q.variables)))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _probs(text):
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad probability list {text!r}") from None


def _add_qubo_opts(p):
    p.add_argument("--penalty", type=float, default=qubo.DEFAULT_PENALTY,
                   help="constraint penalty, must exceed 1 (default %(default)s)")
    p.add_argument("--bias", type=float, default=0.0,
                   help="connectivity tie-break bias; 0 disables (default %(default)s)")


def _add_anneal_opts(p):
    d = AnnealParams()
    p.add_argument("--reads", type=int, default=d.num_reads)
    p.add_argument("--sweeps", type=int, default=d.num_sweeps)
    p.add_argument("--t-initial", type=float, default=d.t_initial)
    p.add_argument("--t-final", type=float, default=d.t_final)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="vulngraph", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="validate a scan report and print statistics")
    p.add_argument("file")
    p.add_argument("--dot", metavar="OUT", help="write the bipartite graph as DOT")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("dual", help="print the weighted connectivity dual")
    p.add_argument("file")
    p.add_argument("--dot", metavar="OUT", help="write the dual as DOT ('-' for stdout)")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("solve", help="minimum vertex cover of the dual")
    p.add_argument("file")
    p.add_argument("--method", choices=["exact", "anneal", "greedy", "brute"], default="exact")
    p.add_argument("--time-budget", type=float, default=None, help="exact solver limit in seconds")
    p.add_argument("--json", action="store_true")
    _add_qubo_opts(p)
    _add_anneal_opts(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("plan", help="prioritised patch plan")
    p.add_argument("file")
    p.add_argument("--method", choices=["exact", "anneal", "greedy", "brute"], default=None,
                   help="default: exact, or anneal above --threshold dual vertices")
    p.add_argument("--threshold", type=int, default=26)
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--json", action="store_true")
    _add_qubo_opts(p)
    _add_anneal_opts(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="check that patching a vuln set removes all kill chains")
    p.add_argument("file")
    p.add_argument("--patched", required=True, help="comma-separated vulnerability ids")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="exact vs annealing benchmark on random graphs")
    p.add_argument("--min", type=int, default=8)
    p.add_argument("--max", type=int, default=24)
    p.add_argument("--probs", type=_probs, default=list(bench.PAPER_EDGE_PROBS))
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--hosts-per-vuln", type=float, default=1.0)
    p.add_argument("--time-budget", type=float, default=60.0)
    p.add_argument("--classical", choices=["exact", "brute"], default="exact",
                   help="classical baseline: branch and bound, or exhaustive QUBO enumeration")
    p.add_argument("--out", default="-", help="per-trial CSV (default stdout)")
    p.add_argument("--summary", help="per-cell summary CSV")
    p.add_argument("--plot-data", metavar="DIR", help="per-probability series for plotting")
    p.add_argument("--penalty", type=float, default=qubo.DEFAULT_PENALTY)
    _add_anneal_opts(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export-qubo", help="write the cover QUBO in coordinate format")
    p.add_argument("file")
    p.add_argument("-o", "--out", default="-")
    p.add_argument("--labels", metavar="OUT", help="write 'index<TAB>vuln' lines")
    _add_qubo_opts(p)
    p.set_defaults(func=cmd_export_qubo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ParseError, ValidationError, InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ExactTimeout, SolverError, InvalidCoverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except TheoremViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_KILLCHAIN


if __name__ == "__main__":
    sys.exit(main())
