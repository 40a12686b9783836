"""Minimum vertex cover backends for the connectivity dual.

* :func:`solve_exact` - branch and bound over the dual, returning the
  lexicographically smallest minimum cover.
* :func:`solve_brute_force` - exhaustive QUBO minimisation (test oracle).
* :func:`sample_annealing` - simulated annealing over the QUBO.
* :func:`solve_greedy` - maximal-matching 2-approximation.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .dual import DualGraph
from .errors import DimensionError, ExactTimeout, ParameterError, SolverError
from .qubo import Qubo, energy


class Method(str, Enum):
    EXACT = "exact"
    BRUTE_FORCE = "brute"
    ANNEALING = "anneal"
    GREEDY = "greedy"


def uncovered_edges(d: DualGraph, vertices) -> list:
    chosen = set(vertices)
    return [(u, v) for u, v in d.edges() if u not in chosen and v not in chosen]


def is_vertex_cover(d: DualGraph, vertices) -> bool:
    chosen = set(vertices)
    return all(u in chosen or v in chosen for u, v in d.edges())


@dataclass(frozen=True)
class VertexCover:
    vertices: frozenset
    valid: bool
    method: Method
    solve_time_us: float = 0.0

    @classmethod
    def of(cls, d: DualGraph, vertices: Iterable, method, solve_time_us=0.0) -> "VertexCover":
        """Build a cover record, checking validity against ``d`` edge by edge."""
        vs = frozenset(vertices)
        stray = vs - d.vertices
        if stray:
            raise ValueError(f"vertices not in the dual: {sorted(v.label for v in stray)}")
        return cls(vs, is_vertex_cover(d, vs), Method(method), float(solve_time_us))

    @property
    def size(self) -> int:
        return len(self.vertices)

    def labels(self) -> list:
        return [v.label for v in sorted(self.vertices)]


@dataclass(frozen=True)
class AnnealParams:
    num_reads: int = 100
    num_sweeps: int = 1000
    t_initial: float = 10.0
    t_final: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.num_reads < 1 or self.num_sweeps < 1:
            raise ParameterError("num_reads and num_sweeps must be at least 1")
        if not (0 < self.t_final < self.t_initial):
            raise ParameterError(
                f"need 0 < t_final < t_initial, got {self.t_final} and {self.t_initial}"
            )
        if not 0 <= self.seed < 2**64:
            raise ParameterError("seed must be a 64-bit unsigned integer")

    def temperatures(self) -> np.ndarray:
        return np.geomspace(self.t_initial, self.t_final, self.num_sweeps)


@dataclass(frozen=True)
class Sample:
    bits: tuple
    energy: float
    count: int


@dataclass(frozen=True)
class SampleSet:
    samples: tuple  # of Sample, ascending energy
    params: AnnealParams
    solve_time_us: float = field(default=0.0, compare=False)

    @property
    def first(self) -> Sample:
        return self.samples[0]

    @property
    def num_reads(self) -> int:
        return sum(s.count for s in self.samples)


# -- exact ------------------------------------------------------------------

class _Search:
    """Bitmask branch and bound. Vertex ``i`` is bit ``i``."""

    def __init__(self, adj, deadline):
        self.adj = adj
        self.deadline = deadline
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes & 0x3FF == 0:
            if time.perf_counter() > self.deadline:
                raise ExactTimeout("exact search exceeded its time budget")

    def matching_bound(self, active: int) -> int:
        adj, free, size = self.adj, active, 0
        while free:
            low = free & -free
            i = low.bit_length() - 1
            free ^= low
            nb = adj[i] & free
            if nb:
                free ^= nb & -nb
                size += 1
        return size

    def min_cover(self, active: int, upper: int) -> int:
        """Minimum cover size of the subgraph induced by ``active``.

        Results ``>= upper`` are only reported as ``upper``.
        """
        self._tick()
        adj = self.adj
        best_v, best_deg, m = -1, 0, active
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            deg = (adj[i] & active).bit_count()
            if deg > best_deg:
                best_v, best_deg = i, deg
        if best_deg == 0:
            return 0
        if upper <= 0 or self.matching_bound(active) >= upper:
            return upper
        bit = 1 << best_v
        best = upper
        # branch 1: best_v joins the cover
        r = 1 + self.min_cover(active & ~bit, best - 1)
        best = min(best, r)
        # branch 2: best_v stays out, so all its neighbours join
        nb = adj[best_v] & active
        c = nb.bit_count()
        if c < best:
            r = c + self.min_cover(active & ~nb & ~bit, best - c)
            best = min(best, r)
        return best


def _greedy_vertices(d: DualGraph) -> set:
    chosen = set()
    for u, v in d.edges():
        if u not in chosen and v not in chosen:
            chosen.add(u)
            chosen.add(v)
    return chosen


def solve_exact(d: DualGraph, time_budget: Optional[float] = None) -> VertexCover:
    """Minimum-cardinality cover; ties go to the lexicographically smallest label list.

    The complement of the result is a maximum independent set of ``d``.
    ``time_budget`` (seconds) raises :class:`ExactTimeout` when exceeded.
    """
    t0 = time.perf_counter()
    deadline = None if time_budget is None else t0 + time_budget
    order = sorted(d.vertices, key=lambda v: v.label)
    pos = {v: i for i, v in enumerate(order)}
    adj = [0] * len(order)
    for u, v in d.edges():
        adj[pos[u]] |= 1 << pos[v]
        adj[pos[v]] |= 1 << pos[u]
    search = _Search(adj, deadline)
    full = (1 << len(order)) - 1
    k = search.min_cover(full, len(_greedy_vertices(d)) + 1)

    # fix vertices in label order, taking each one whenever a size-k cover still exists
    forced_in = forced_out = 0
    for i in range(len(order)):
        bit = 1 << i
        trial_in = forced_in | bit
        if trial_in.bit_count() <= k and _feasible(search, full, trial_in, forced_out, k):
            forced_in = trial_in
        else:
            forced_out |= bit
            for j in range(len(order)):
                if forced_out >> j & 1:
                    forced_in |= adj[j]
    cover = [order[i] for i in range(len(order)) if forced_in >> i & 1]
    elapsed = (time.perf_counter() - t0) * 1e6
    result = VertexCover.of(d, cover, Method.EXACT, elapsed)
    if not result.valid or result.size != k:
        raise SolverError("exact search produced an inconsistent cover")
    return result


def _feasible(search: _Search, full: int, forced_in: int, forced_out: int, k: int) -> bool:
    adj = search.adj
    need_in = forced_in
    m = forced_out
    while m:
        low = m & -m
        m ^= low
        need_in |= adj[low.bit_length() - 1]
    if need_in & forced_out:
        return False
    budget = k - need_in.bit_count()
    if budget < 0:
        return False
    rest = full & ~need_in & ~forced_out
    return search.min_cover(rest, budget + 1) <= budget


# -- QUBO based -------------------------------------------------------------

BRUTE_FORCE_CAP = 24


def solve_brute_force(q: Qubo, max_n: int = BRUTE_FORCE_CAP, backend=None):
    """Global minimiser by enumerating all ``2**n`` assignments.

    Returns ``(bits, energy)``. Ties go to the smallest integer value with
    ``bits[i]`` as bit ``i``.
    """
    if q.n > max_n:
        raise SolverError(f"brute force refused: {q.n} variables exceeds cap of {max_n}")
    lin = np.asarray(q.linear, dtype=np.float64)
    code = kernels.enumerate_minimum(q.symmetric_couplings(), lin, backend=backend)
    bits = kernels.code_to_bits(code, q.n)
    return bits, energy(q, bits)


def sample_annealing(q: Qubo, p: AnnealParams = AnnealParams(), backend=None) -> SampleSet:
    """Single-spin-flip Metropolis annealing with a geometric temperature schedule.

    Every read gets its own random stream spawned from ``p.seed``; identical
    parameters give an identical sample set.
    """
    reads = np.random.SeedSequence(p.seed).spawn(p.num_reads)
    S = q.symmetric_couplings()
    lin = np.asarray(q.linear, dtype=np.float64)
    t0 = time.perf_counter()
    states = kernels.anneal(S, lin, p.temperatures(), reads, backend=backend)
    elapsed = (time.perf_counter() - t0) * 1e6
    counts = Counter(tuple(int(b) for b in row) for row in states)
    samples = [Sample(bits, energy(q, np.array(bits, dtype=np.int8)), c) for bits, c in counts.items()]
    samples.sort(key=lambda s: (s.energy, _code(s.bits)))
    return SampleSet(tuple(samples), p, elapsed)


def _code(bits) -> int:
    return sum(1 << i for i, b in enumerate(bits) if b)


def decode(q: Qubo, x, d: DualGraph, method=Method.ANNEALING, solve_time_us=0.0) -> VertexCover:
    """Map set bits back to dual vertices. Validity is checked, never repaired."""
    x = np.asarray(x)
    if x.shape != (q.n,):
        raise DimensionError(f"expected a bit-vector of length {q.n}, got shape {x.shape}")
    if set(q.variables) != set(d.vertices):
        raise DimensionError("QUBO variables do not match the dual's vertices")
    chosen = [q.variables[i] for i in np.flatnonzero(x)]
    return VertexCover.of(d, chosen, method, solve_time_us)


def solve_greedy(d: DualGraph) -> VertexCover:
    """Take both endpoints of every edge not yet covered (size <= 2 * optimum)."""
    t0 = time.perf_counter()
    chosen = _greedy_vertices(d)
    return VertexCover.of(d, chosen, Method.GREEDY, (time.perf_counter() - t0) * 1e6)
