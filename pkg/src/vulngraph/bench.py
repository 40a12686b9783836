"""Random-graph benchmark comparing the exact solver with the annealing sampler.

Each cell of the (vulnerability count, edge probability, trial) grid gets a
fresh random vulnerability graph. Records keep one row per trial; :func:`summarize`
folds trials into one row per (count, probability) cell.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .dual import build_dual
from .errors import ExactTimeout, ParameterError, TheoremViolation
from .graph import VulnerabilityGraph, host, vuln
from .qubo import DEFAULT_PENALTY, encode_mvc
from .solvers import (
    AnnealParams, Method, decode, sample_annealing, solve_brute_force, solve_exact, solve_greedy,
)
from .verify import verify_remediation

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "n_vulns", "edge_prob", "trial", "seed", "exact_size", "best_sample_size",
    "size_diff", "exact_time_us", "sample_time_us", "invalid_count", "greedy_size",
)
TIMING_COLUMNS = ("exact_time_us", "sample_time_us")
PAPER_EDGE_PROBS = (0.5, 0.3334, 0.1)


def random_vuln_graph(n_vulns: int, n_hosts: int, p: float, seed: int) -> VulnerabilityGraph:
    """Each vuln/host pair is an edge independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"edge probability must lie in [0, 1], got {p!r}")
    if n_vulns < 0 or n_hosts < 0:
        raise ParameterError("vertex counts must be non-negative")
    rng = np.random.default_rng(seed)
    mask = rng.random((n_vulns, n_hosts)) < p
    vw, hw = len(str(max(n_vulns - 1, 0))), len(str(max(n_hosts - 1, 0)))
    vulns = [vuln(f"v{i:0{vw}d}") for i in range(n_vulns)]
    hosts = [host(f"h{j:0{hw}d}") for j in range(n_hosts)]
    edges = {(vulns[i], hosts[j]) for i, j in zip(*np.nonzero(mask))}
    return VulnerabilityGraph(hosts, vulns, edges)


@dataclass(frozen=True)
class BenchConfig:
    vuln_counts: Sequence[int] = tuple(range(8, 25))
    edge_probs: Sequence[float] = PAPER_EDGE_PROBS
    trials: int = 3
    seed: int = 0
    anneal: AnnealParams = AnnealParams()
    penalty: float = DEFAULT_PENALTY
    hosts_per_vuln: float = 1.0
    exact_time_budget: Optional[float] = 60.0
    classical: str = "exact"  # or "brute": exhaustive QUBO enumeration

    def __post_init__(self):
        object.__setattr__(self, "vuln_counts", tuple(int(n) for n in self.vuln_counts))
        object.__setattr__(self, "edge_probs", tuple(float(p) for p in self.edge_probs))
        if any(not 0.0 <= p <= 1.0 for p in self.edge_probs):
            raise ParameterError("edge probabilities must lie in [0, 1]")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if any(n < 1 for n in self.vuln_counts):
            raise ParameterError("vulnerability counts must be positive")
        if self.classical not in ("exact", "brute"):
            raise ParameterError(f"classical solver must be 'exact' or 'brute', got {self.classical!r}")

    def n_hosts(self, n_vulns: int) -> int:
        return max(1, round(n_vulns * self.hosts_per_vuln))


@dataclass
class BenchmarkRecord:
    n_vulns: int
    edge_prob: float
    trial: int
    seed: int
    exact_size: Optional[int]
    best_sample_size: int
    best_sample_valid: bool
    exact_time_us: float
    sample_time_us: float
    invalid_count: int
    num_reads: int
    greedy_size: int
    exact_timeout: bool = False
    killchain_free: bool = True

    @property
    def size_diff(self) -> Optional[int]:
        if self.exact_size is None:
            return None
        return self.best_sample_size - self.exact_size

    def csv_row(self) -> dict:
        blank = lambda x: "" if x is None else x  # noqa: E731
        return {
            "n_vulns": self.n_vulns,
            "edge_prob": f"{self.edge_prob:g}",
            "trial": self.trial,
            "seed": self.seed,
            "exact_size": blank(self.exact_size),
            "best_sample_size": self.best_sample_size,
            "size_diff": blank(self.size_diff),
            "exact_time_us": "" if self.exact_timeout else f"{self.exact_time_us:.0f}",
            "sample_time_us": f"{self.sample_time_us:.0f}",
            "invalid_count": self.invalid_count,
            "greedy_size": self.greedy_size,
        }


def cell_seed(master: int, n_vulns: int, prob_index: int, trial: int) -> int:
    ss = np.random.SeedSequence([master, n_vulns, prob_index, trial])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def _warm_up():
    # keep JIT compilation out of the first timed cell
    q = encode_mvc(build_dual(random_vuln_graph(3, 3, 1.0, 0)))
    sample_annealing(q, AnnealParams(num_reads=1, num_sweeps=2, seed=0))
    solve_brute_force(q)


def run_cell(cfg: BenchConfig, n: int, prob_index: int, trial: int) -> BenchmarkRecord:
    p = cfg.edge_probs[prob_index]
    seed = cell_seed(cfg.seed, n, prob_index, trial)
    g = random_vuln_graph(n, cfg.n_hosts(n), p, seed)
    d = build_dual(g)

    q = encode_mvc(d, cfg.penalty)
    exact, timeout = None, False
    try:
        if cfg.classical == "brute":
            t0 = time.perf_counter()
            bits, _ = solve_brute_force(q)
            exact = decode(q, bits, d, Method.BRUTE_FORCE, (time.perf_counter() - t0) * 1e6)
        else:
            exact = solve_exact(d, time_budget=cfg.exact_time_budget)
    except ExactTimeout:
        timeout = True
        log.warning("exact solve timed out for n=%d p=%g trial=%d", n, p, trial)
    params = AnnealParams(cfg.anneal.num_reads, cfg.anneal.num_sweeps,
                          cfg.anneal.t_initial, cfg.anneal.t_final, seed)
    ss = sample_annealing(q, params)
    covers = [(decode(q, s.bits, d), s.count) for s in ss.samples]
    invalid = sum(c for cov, c in covers if not cov.valid)
    best = covers[0][0]
    greedy = solve_greedy(d)

    to_check = [cov for cov, _ in covers if cov.valid] + [greedy]
    if exact is not None:
        to_check.append(exact)
    for cov in to_check:
        report = verify_remediation(g, cov)
        if not report.killchain_free:
            raise TheoremViolation(
                f"valid {cov.method.value} cover {cov.labels()} left kill chain "
                f"{[v.label for v in report.witness.vulns]} (n={n}, p={p}, seed={seed})"
            )

    return BenchmarkRecord(
        n_vulns=n, edge_prob=p, trial=trial, seed=seed,
        exact_size=None if exact is None else exact.size,
        best_sample_size=best.size, best_sample_valid=best.valid,
        exact_time_us=math.nan if exact is None else exact.solve_time_us,
        sample_time_us=ss.solve_time_us,
        invalid_count=invalid, num_reads=ss.num_reads,
        greedy_size=greedy.size, exact_timeout=timeout,
    )


def run_benchmark(cfg: BenchConfig, progress: Callable | None = None) -> list:
    """One record per (n, p, trial) in canonical order.

    Raises :class:`TheoremViolation` if any valid cover leaves a kill chain.
    """
    _warm_up()
    records = []
    for n in cfg.vuln_counts:
        for pi in range(len(cfg.edge_probs)):
            for trial in range(cfg.trials):
                rec = run_cell(cfg, n, pi, trial)
                records.append(rec)
                if progress is not None:
                    progress(rec)
    return records


@dataclass(frozen=True)
class SummaryRow:
    n_vulns: int
    edge_prob: float
    trials: int
    mean_size_diff: float
    mean_exact_time_us: float
    mean_sample_time_us: float
    invalid_count: int
    mean_greedy_size: float
    timeouts: int = 0


def summarize(records) -> list:
    """Fold trials into one row per (n_vulns, edge_prob)."""
    records = list(records)
    if not records:
        raise ValueError("cannot summarise an empty record list")
    cells: dict = {}
    for r in records:
        cells.setdefault((r.n_vulns, r.edge_prob), []).append(r)
    rows = []
    for (n, p), rs in cells.items():
        diffs = [r.size_diff for r in rs if r.size_diff is not None]
        times = [r.exact_time_us for r in rs if not r.exact_timeout]
        rows.append(SummaryRow(
            n_vulns=n, edge_prob=p, trials=len(rs),
            mean_size_diff=float(np.mean(diffs)) if diffs else math.nan,
            mean_exact_time_us=float(np.mean(times)) if times else math.nan,
            mean_sample_time_us=float(np.mean([r.sample_time_us for r in rs])),
            invalid_count=sum(r.invalid_count for r in rs),
            mean_greedy_size=float(np.mean([r.greedy_size for r in rs])),
            timeouts=sum(r.exact_timeout for r in rs),
        ))
    return rows


def records_to_csv(records) -> str:
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.csv_row())
    return out.getvalue()


def _fmt(x, spec):
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else format(x, spec)


def summary_to_csv(rows) -> str:
    """Wide layout: one line per vuln count, one column block per edge probability."""
    probs = list(dict.fromkeys(r.edge_prob for r in rows))
    by_cell = {(r.n_vulns, r.edge_prob): r for r in rows}
    header = ["n_vulns"]
    for p in probs:
        tag = f"p{p:g}"
        header += [f"{tag}_mean_size_diff", f"{tag}_exact_us", f"{tag}_sample_us", f"{tag}_invalid"]
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for n in sorted({r.n_vulns for r in rows}):
        line = [n]
        for p in probs:
            r = by_cell.get((n, p))
            if r is None:
                line += ["", "", "", ""]
            else:
                line += [_fmt(r.mean_size_diff, ".3f"), _fmt(r.mean_exact_time_us, ".0f"),
                         _fmt(r.mean_sample_time_us, ".0f"), r.invalid_count]
        w.writerow(line)
    return out.getvalue()


def write_plot_data(rows, directory) -> list:
    """One CSV per edge probability with the series plotted against vuln count."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for p in dict.fromkeys(r.edge_prob for r in rows):
        path = os.path.join(directory, f"times_p{p:g}.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n_vulns", "exact_us", "sample_us", "invalid_count", "mean_size_diff"])
            for r in sorted((r for r in rows if r.edge_prob == p), key=lambda r: r.n_vulns):
                w.writerow([r.n_vulns, _fmt(r.mean_exact_time_us, ".0f"),
                            _fmt(r.mean_sample_time_us, ".0f"), r.invalid_count,
                            _fmt(r.mean_size_diff, ".3f")])
        paths.append(path)
    return paths


def strip_timing(csv_text: str) -> str:
    """Drop timing columns so runs can be compared byte for byte."""
    rows = list(csv.DictReader(io.StringIO(csv_text)))
    keep = [c for c in CSV_COLUMNS if c not in TIMING_COLUMNS]
    out = io.StringIO()
    w = csv.DictWriter(out, fieldnames=keep, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return out.getvalue()
