"""Hot loops: Metropolis annealing and exhaustive QUBO enumeration.

Each kernel has a numba version and a numpy version. Both consume the same
pre-drawn random numbers and perform the same floating-point operations in the
same order, so for a given seed they return identical states.

Kernels work on a zero-diagonal symmetric coupling matrix ``S`` and the linear
vector ``lin``; the local field of spin ``i`` is ``lin[i] + sum_j S[i, j] x[j]``
and flipping ``x[i]`` changes the energy by ``+field`` (0 -> 1) or ``-field``.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit, resolve_backend

# max bytes of pre-drawn uniforms held at once by the numpy annealer
_BATCH_BYTES = 32 * 2**20
_ENUM_CHUNK = 1 << 15


@njit(cache=True, nogil=True)
def _anneal_read_numba(S, lin, x, u, temps):
    n = x.shape[0]
    fields = lin.copy()
    for i in range(n):
        if x[i] != 0:
            for j in range(n):
                fields[j] += S[i, j]
    for s in range(temps.shape[0]):
        t = temps[s]
        for i in range(n):
            if x[i] == 0:
                delta = fields[i]
            else:
                delta = -fields[i]
            if delta <= 0.0 or u[s, i] < np.exp(-delta / t):
                if x[i] == 0:
                    x[i] = 1
                    d = 1.0
                else:
                    x[i] = 0
                    d = -1.0
                for j in range(n):
                    fields[j] += d * S[i, j]
    return x


def _anneal_batch_numpy(S, lin, X, U, temps):
    b, n = X.shape
    X = X.copy()
    F = np.tile(lin, (b, 1))
    for i in range(n):
        F += X[:, i : i + 1] * S[i]
    for s in range(temps.shape[0]):
        t = temps[s]
        for i in range(n):
            up = X[:, i] == 0
            delta = np.where(up, F[:, i], -F[:, i])
            accept = (delta <= 0.0) | (U[:, s, i] < np.exp(-np.maximum(delta, 0.0) / t))
            if not accept.any():
                continue
            d = np.where(up, 1.0, -1.0) * accept
            X[:, i] = np.where(accept, up.astype(X.dtype), X[:, i])
            F += d[:, None] * S[i]
    return X


def _draw(seed_seq, n, n_sweeps):
    rng = np.random.default_rng(seed_seq)
    x0 = rng.integers(0, 2, size=n).astype(np.int8)
    u = rng.random((n_sweeps, n))
    return x0, u


def anneal(S, lin, temps, read_seeds, backend=None) -> np.ndarray:
    """Run one annealing read per entry of ``read_seeds``.

    ``read_seeds`` are ``np.random.SeedSequence`` children; each read draws its
    initial state and acceptance uniforms from its own stream, so results do not
    depend on batching or backend. Returns final states, shape ``(reads, n)``.
    """
    backend = resolve_backend(backend)
    S = np.ascontiguousarray(S, dtype=np.float64)
    lin = np.ascontiguousarray(lin, dtype=np.float64)
    temps = np.ascontiguousarray(temps, dtype=np.float64)
    n, n_sweeps = lin.shape[0], temps.shape[0]
    out = np.empty((len(read_seeds), n), dtype=np.int8)
    if n == 0:
        return out
    if backend == "numba":
        for r, ss in enumerate(read_seeds):
            x0, u = _draw(ss, n, n_sweeps)
            out[r] = _anneal_read_numba(S, lin, x0, u, temps)
        return out
    per_read = max(1, n_sweeps * n * 8)
    batch = max(1, _BATCH_BYTES // per_read)
    for start in range(0, len(read_seeds), batch):
        chunk = read_seeds[start : start + batch]
        drawn = [_draw(ss, n, n_sweeps) for ss in chunk]
        X = np.stack([x for x, _ in drawn])
        U = np.stack([u for _, u in drawn])
        out[start : start + len(chunk)] = _anneal_batch_numpy(S, lin, X, U, temps)
    return out


@njit(cache=True, nogil=True)
def _enumerate_numba(S, lin, tol):
    n = lin.shape[0]
    x = np.zeros(n, np.int8)
    fields = lin.copy()
    e = 0.0
    best_e = 0.0
    best_code = 0
    code = 0
    for k in range(1, 1 << n):
        i = 0
        while (k >> i) & 1 == 0:
            i += 1
        if x[i] == 0:
            e += fields[i]
            x[i] = 1
            d = 1.0
        else:
            e -= fields[i]
            x[i] = 0
            d = -1.0
        for j in range(n):
            fields[j] += d * S[i, j]
        code ^= 1 << i
        if e < best_e - tol or (e <= best_e + tol and code < best_code):
            best_e = e
            best_code = code
    return best_code


def _enumerate_numpy(S, lin, tol):
    n = lin.shape[0]
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)
    best_e, best_code = np.inf, 0
    for start in range(0, total, _ENUM_CHUNK):
        codes = np.arange(start, min(total, start + _ENUM_CHUNK), dtype=np.int64)
        bits = ((codes[:, None] >> shifts) & 1).astype(np.float64)
        e = bits @ lin + 0.5 * np.einsum("ij,ij->i", bits @ S, bits)
        m = e.min()
        if m < best_e - tol:
            best_e = m
            best_code = int(codes[np.argmax(e <= m + tol)])
    return best_code


def enumerate_minimum(S, lin, backend=None) -> int:
    """Exhaustive minimiser of ``x.lin + x.S.x / 2`` as an integer code.

    Bit ``i`` of the returned code is ``x[i]``. Energies within a small
    tolerance count as ties and go to the smaller code.
    """
    backend = resolve_backend(backend)
    S = np.ascontiguousarray(S, dtype=np.float64)
    lin = np.ascontiguousarray(lin, dtype=np.float64)
    if lin.shape[0] == 0:
        return 0
    tol = 1e-9 * (1.0 + np.abs(lin).sum() + 0.5 * np.abs(S).sum())
    if backend == "numba":
        return int(_enumerate_numba(S, lin, tol))
    return _enumerate_numpy(S, lin, tol)


def code_to_bits(code: int, n: int) -> np.ndarray:
    return ((code >> np.arange(n, dtype=np.int64)) & 1).astype(np.int8)
