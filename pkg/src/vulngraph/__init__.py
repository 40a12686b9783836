"""Vulnerability graphs, connectivity duals and minimum-vertex-cover patch planning."""

from ._accel import HAVE_NUMBA, default_backend
from .bench import BenchConfig, BenchmarkRecord, random_vuln_graph, run_benchmark, summarize
from .dual import DualGraph, build_dual, shared_hosts
from .errors import (
    DimensionError, DomainError, ExactTimeout, InputError, InvalidCoverError, ParameterError,
    ParseError, SolverError, TheoremViolation, UnknownVertexError, ValidationError,
    VulnGraphError,
)
from .graph import (
    KillChain, Kind, VertexId, VulnerabilityGraph, build_graph, find_killchain, host,
    neighbors, vuln,
)
from .ingest import PatchPlan, ScanReport, make_patch_plan, parse_scan_report, serialize_graph
from .qubo import (
    IsingModel, Qubo, encode_mvc, encode_weighted_mvc, energy, ising_energy, to_ising,
)
from .solvers import (
    AnnealParams, Method, SampleSet, VertexCover, decode, is_vertex_cover, sample_annealing,
    solve_brute_force, solve_exact, solve_greedy,
)
from .verify import RemediationReport, remove_vulns, verify_remediation

__version__ = "0.1.0"
