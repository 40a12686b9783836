"""QUBO encoding of minimum vertex cover on the connectivity dual.

A :class:`Qubo` stores ``offset + sum_i a_i x_i + sum_{i<j} b_ij x_i x_j`` in
upper-triangular form. The cover encoding is

    sum_v c_v x_v + P * sum_{(u,v) in E} (1 - x_u)(1 - x_v)

with ``c_v = 1`` for the plain problem. Expanding gives linear terms
``c_v - P deg(v)``, quadratic terms ``+P`` per edge and offset ``P |E|``, so the
energy of a valid cover is its (weighted) size.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .dual import DualGraph
from .errors import DimensionError, ParameterError, ParseError

DEFAULT_PENALTY = 2.0


@dataclass(frozen=True, eq=False)
class Qubo:
    variables: tuple  # index -> label (dual vertex, or int for raw models)
    linear: tuple
    quadratic: Mapping  # (i, j) with i < j -> coefficient
    offset: float = 0.0
    _index: Mapping = field(init=False, repr=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        linear = tuple(float(a) for a in self.linear)
        if len(linear) != len(variables):
            raise DimensionError(f"{len(linear)} linear terms for {len(variables)} variables")
        index = {v: i for i, v in enumerate(variables)}
        if len(index) != len(variables):
            raise ParameterError("variable labels must be unique")
        quad = {}
        n = len(variables)
        for (i, j), b in dict(self.quadratic).items():
            if not (0 <= i < j < n):
                raise DimensionError(f"quadratic key ({i}, {j}) must satisfy 0 <= i < j < {n}")
            if b != 0:
                quad[(int(i), int(j))] = float(b)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "quadratic", MappingProxyType(dict(sorted(quad.items()))))
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "_index", MappingProxyType(index))

    @property
    def n(self) -> int:
        return len(self.variables)

    def index(self, label) -> int:
        return self._index[label]

    def __eq__(self, other):
        if not isinstance(other, Qubo):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.linear == other.linear
            and dict(self.quadratic) == dict(other.quadratic)
            and self.offset == other.offset
        )

    def __hash__(self):
        return hash((self.variables, self.linear, tuple(self.quadratic.items()), self.offset))

    def matrix(self) -> np.ndarray:
        """Dense upper-triangular ``Q`` with the linear terms on the diagonal."""
        q = np.zeros((self.n, self.n))
        q[np.diag_indices(self.n)] = self.linear
        for (i, j), b in self.quadratic.items():
            q[i, j] = b
        return q

    def symmetric_couplings(self) -> np.ndarray:
        """Zero-diagonal symmetric matrix ``S`` with ``S_ij = S_ji = b_ij``."""
        s = np.zeros((self.n, self.n))
        for (i, j), b in self.quadratic.items():
            s[i, j] = b
            s[j, i] = b
        return s


@dataclass(frozen=True)
class IsingModel:
    """``offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j`` over spins ``s in {-1, +1}``."""

    fields: tuple
    couplings: Mapping
    offset: float = 0.0

    @property
    def n(self) -> int:
        return len(self.fields)


def _check_penalty(penalty):
    if not penalty > 1:
        raise ParameterError(
            f"penalty must exceed 1 (the unit vertex cost), got {penalty!r}"
        )


def _cover_qubo(d: DualGraph, penalty: float, costs: Sequence[float]) -> Qubo:
    variables = tuple(d.sorted_vertices())
    pos = {v: i for i, v in enumerate(variables)}
    linear = [c - penalty * d.degree(v) for c, v in zip(costs, variables)]
    quad = {(pos[u], pos[v]): penalty for u, v in d.edges()}
    return Qubo(variables, linear, quad, penalty * d.n_edges)


def encode_mvc(d: DualGraph, penalty: float = DEFAULT_PENALTY) -> Qubo:
    _check_penalty(penalty)
    return _cover_qubo(d, penalty, [1.0] * len(d.vertices))


def connectivity_weights(d: DualGraph) -> dict:
    """Incident-weight sums normalised so the best-connected vertex gets 1.0."""
    strength = {v: d.strength(v) for v in d.vertices}
    top = max(strength.values(), default=0)
    if top == 0:
        return {v: 0.0 for v in strength}
    return {v: s / top for v, s in strength.items()}


def max_bias(d: DualGraph) -> float:
    """Exclusive upper bound on the tie-breaking bias of :func:`encode_weighted_mvc`."""
    return 1.0 / (1.0 + sum(connectivity_weights(d).values()))


def encode_weighted_mvc(d: DualGraph, penalty: float = DEFAULT_PENALTY, bias: float = 0.0) -> Qubo:
    """Cover encoding that prefers well-connected vulnerabilities.

    Each vertex costs ``1 - bias * w_v`` where ``w_v`` is its normalised
    connectivity weight. Below :func:`max_bias` the discount can never pay for
    an extra vertex, so ground states stay cardinality-minimum and, among
    those, maximise total connectivity.
    """
    _check_penalty(penalty)
    bound = max_bias(d)
    if not 0 <= bias < bound:
        raise ParameterError(f"bias must lie in [0, {bound:.6g}), got {bias!r}")
    w = connectivity_weights(d)
    costs = [1.0 - bias * w[v] for v in d.sorted_vertices()]
    return _cover_qubo(d, penalty, costs)


def energy(q: Qubo, x) -> float:
    x = np.asarray(x)
    if x.shape != (q.n,):
        raise DimensionError(f"expected a bit-vector of length {q.n}, got shape {x.shape}")
    total = q.offset
    for i, a in enumerate(q.linear):
        if x[i]:
            total += a
    for (i, j), b in q.quadratic.items():
        if x[i] and x[j]:
            total += b
    return total


def to_ising(q: Qubo) -> IsingModel:
    """Rewrite ``q`` over spins via ``x_i = (1 + s_i) / 2``."""
    h = [a / 2.0 for a in q.linear]
    offset = q.offset + sum(q.linear) / 2.0
    couplings = {}
    for (i, j), b in q.quadratic.items():
        couplings[(i, j)] = b / 4.0
        h[i] += b / 4.0
        h[j] += b / 4.0
        offset += b / 4.0
    return IsingModel(tuple(h), MappingProxyType(couplings), offset)


def ising_energy(m: IsingModel, s) -> float:
    s = np.asarray(s)
    if s.shape != (m.n,):
        raise DimensionError(f"expected {m.n} spins, got shape {s.shape}")
    total = m.offset + sum(hi * si for hi, si in zip(m.fields, s.tolist()))
    for (i, j), c in m.couplings.items():
        total += c * s[i] * s[j]
    return float(total)


def dumps(q: Qubo) -> str:
    """Plain-text coordinate format: ``n offset`` then ``i i a_i`` / ``i j b_ij`` lines."""
    out = io.StringIO()
    out.write(f"{q.n} {q.offset!r}\n")
    for i, a in enumerate(q.linear):
        out.write(f"{i} {i} {a!r}\n")
    for (i, j), b in q.quadratic.items():
        out.write(f"{i} {j} {b!r}\n")
    return out.getvalue()


def loads(text: str, variables: Sequence | None = None) -> Qubo:
    """Inverse of :func:`dumps`. Blank lines and ``#`` comments are skipped."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("missing header line", 1, 1)
    lineno, head = rows[0]
    try:
        n, offset = int(head[0]), float(head[1])
        if len(head) != 2 or n < 0:
            raise ValueError
    except (ValueError, IndexError):
        raise ParseError("header must be 'n offset'", lineno, 1) from None
    linear = [0.0] * n
    quad = {}
    for lineno, parts in rows[1:]:
        try:
            i, j, c = int(parts[0]), int(parts[1]), float(parts[2])
            if len(parts) != 3:
                raise ValueError
        except (ValueError, IndexError):
            raise ParseError("expected 'i j coefficient'", lineno, 1) from None
        if not (0 <= i <= j < n):
            raise ParseError(f"index pair ({i}, {j}) outside upper triangle of size {n}", lineno, 1)
        if i == j:
            linear[i] += c
        else:
            quad[(i, j)] = quad.get((i, j), 0.0) + c
    if variables is None:
        variables = range(n)
    return Qubo(tuple(variables), linear, quad, offset)
