"""Random structural connectivity, AR(1) coupling, simulation and exact covariance.

The process is ``X_t = A X_{t-1} + e_t`` with ``e_t ~ N(0, I)`` and a
symmetric coupling ``A = s (SC + alpha I) / lambda_max``. Because ``A`` is
symmetric, the stationary covariance is ``(I - A^2)^{-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DegenerateNormalization, InvalidArgument, NumericalError
from .rng import make_rng

WEIGHT_DISTS = ("uniform01", "halfnormal")

# dense eigensolve up to this size, power iteration above
DENSE_EIG_MAX_N = 1000
# condition number of I - A^2 beyond which the solve is refused
MAX_CONDITION = 1e12
_CHUNK = 16384


@dataclass(frozen=True, eq=False)
class StructuralGraph:
    adjacency: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        adj = np.asarray(self.adjacency)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InvalidArgument("adjacency must be square")
        if not np.all((adj == 0) | (adj == 1)):
            raise InvalidArgument("adjacency entries must be 0 or 1")
        if not np.array_equal(adj, adj.T):
            raise InvalidArgument("adjacency must be symmetric")
        if np.any(np.diag(adj) != 0):
            raise InvalidArgument("adjacency diagonal must be zero")
        object.__setattr__(self, "adjacency", adj.astype(np.int8))
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != adj.shape:
                raise InvalidArgument("weights shape differs from adjacency")
            if np.any(w < 0) or np.any((w != 0) != (adj != 0)):
                raise InvalidArgument("weights must be positive exactly on edges")
            object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    def matrix(self) -> np.ndarray:
        """Weighted matrix if present, else the 0/1 adjacency as floats."""
        if self.weights is not None:
            return self.weights
        return self.adjacency.astype(float)


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    entries: np.ndarray
    s: float
    alpha: float
    lambda_max: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class TimeSeriesSample:
    values: np.ndarray  # n x t_len
    seed: int
    burn_in: int

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def t_len(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _entries(a) -> np.ndarray:
    return a.entries if isinstance(a, (CouplingMatrix, CovarianceMatrix)) else np.asarray(a, float)


def _upper_mask(n: int, rng: np.random.Generator, p: float) -> np.ndarray:
    iu = np.triu_indices(n, k=1)
    draws = rng.random(iu[0].size) < p
    adj = np.zeros((n, n), dtype=np.int8)
    adj[iu[0][draws], iu[1][draws]] = 1
    return adj | adj.T


def generate_er(n: int, p: float, seed: int) -> StructuralGraph:
    """G(n, p): each of the n(n-1)/2 pairs is an edge independently with probability p."""
    if n < 2:
        raise InvalidArgument(f"n must be >= 2, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"p must lie in [0, 1], got {p}")
    return StructuralGraph(_upper_mask(n, make_rng(seed), p))


def generate_weighted_er(n: int, p: float, dist: str, seed: int) -> StructuralGraph:
    """G(n, p) topology with i.i.d. positive link strengths.

    ``uniform01`` draws Uniform(0, 1); ``halfnormal`` draws |N(0, 1)|. The
    topology uses the same stream prefix as :func:`generate_er`, so a seed
    gives the same edges weighted or not.
    """
    if dist not in WEIGHT_DISTS:
        raise InvalidArgument(f"unknown weight distribution {dist!r}; expected one of {WEIGHT_DISTS}")
    if n < 2:
        raise InvalidArgument(f"n must be >= 2, got {n}")
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"p must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    adj = _upper_mask(n, rng, p)
    iu, ju = np.nonzero(np.triu(adj, k=1))
    if dist == "uniform01":
        w = rng.random(iu.size)
        # Uniform[0,1) may return exactly 0; weights must stay positive on edges
        w = np.where(w == 0.0, np.nextafter(0.0, 1.0), w)
    else:
        w = np.abs(rng.standard_normal(iu.size))
        w = np.where(w == 0.0, np.nextafter(0.0, 1.0), w)
    weights = np.zeros((n, n))
    weights[iu, ju] = w
    weights[ju, iu] = w
    return StructuralGraph(adj, weights)


def power_iteration(m: np.ndarray, tol: float = 1e-12, max_iter: int = 100_000,
                    seed: int = 0) -> float:
    """Largest-magnitude eigenvalue magnitude of a symmetric matrix.

    Iterates on ``m @ m`` so that a +/- pair of extreme eigenvalues does not
    make the iterate oscillate; returns ``sqrt`` of the converged Rayleigh
    quotient.
    """
    m = np.asarray(m, float)
    n = m.shape[0]
    if not np.any(m):
        return 0.0
    v = make_rng(seed).standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        w = m @ (m @ v)
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0
        new = float(v @ w)
        v = w / nrm
        if abs(new - est) <= tol * abs(new):
            return math.sqrt(new)
        est = new
    raise NumericalError(f"power iteration did not converge in {max_iter} iterations")


def spectral_radius(m, tol: float = 1e-12) -> float:
    """Largest eigenvalue magnitude of a symmetric matrix."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgument("matrix must be square")
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * scale):
        raise InvalidArgument("matrix must be symmetric")
    if m.shape[0] > DENSE_EIG_MAX_N:
        return power_iteration(m, tol=tol)
    try:
        ev = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolve failed: {exc}") from exc
    return float(np.max(np.abs(ev))) if ev.size else 0.0


def build_coupling(sc: StructuralGraph, s: float, alpha: float) -> CouplingMatrix:
    if not 0.0 < s < 1.0:
        raise InvalidArgument(f"s must lie in (0, 1), got {s}")
    if alpha < 0:
        raise InvalidArgument(f"alpha must be >= 0, got {alpha}")
    base = sc.matrix() + alpha * np.eye(sc.n)
    lam = spectral_radius(base)
    if lam == 0.0:
        raise DegenerateNormalization("SC + alpha*I has zero spectral radius (empty SC with alpha=0)")
    return CouplingMatrix(entries=s * base / lam, s=float(s), alpha=float(alpha), lambda_max=lam)


def default_burn_in(s: float) -> int:
    return max(1000, math.ceil(20.0 / (1.0 - s)))


def _iter_ar1(a: np.ndarray, total: int, seed: int) -> Iterator[np.ndarray]:
    """Yield consecutive blocks of states X_1..X_total (rows are time steps)."""
    n = a.shape[0]
    rng = make_rng(seed)
    x = np.zeros(n)
    done = 0
    while done < total:
        k = min(_CHUNK, total - done)
        block = rng.standard_normal((k, n))
        # rows are states; A symmetric so x @ A == A @ x
        block[0] += x @ a
        for t in range(1, k):
            block[t] += block[t - 1] @ a
        x = block[-1]
        done += k
        yield block


def _check_sim_args(a, t_len, burn_in):
    if t_len < 1:
        raise InvalidArgument(f"t_len must be positive, got {t_len}")
    if burn_in < 0:
        raise InvalidArgument(f"burn_in must be non-negative, got {burn_in}")
    entries = _entries(a)
    if spectral_radius(entries) >= 1.0:
        raise InvalidArgument("coupling spectral radius must be < 1")
    return entries


def simulate_ar1(a: CouplingMatrix, t_len: int, burn_in: int | None = None,
                 seed: int = None) -> TimeSeriesSample:
    """Simulate from X_0 = 0, drop ``burn_in`` steps, keep ``t_len``."""
    if burn_in is None:
        burn_in = default_burn_in(a.s) if isinstance(a, CouplingMatrix) else 1000
    entries = _check_sim_args(a, t_len, burn_in)
    out = np.empty((t_len, entries.shape[0]))
    pos = -burn_in
    for block in _iter_ar1(entries, burn_in + t_len, seed):
        lo, hi = pos, pos + block.shape[0]
        if hi > 0:
            out[max(lo, 0):hi] = block[max(0, -lo):]
        pos = hi
    return TimeSeriesSample(values=np.ascontiguousarray(out.T), seed=seed, burn_in=burn_in)


def ar1_sample_covariance(a: CouplingMatrix, t_len: int, burn_in: int | None = None,
                          seed: int = None) -> np.ndarray:
    """Sample covariance (ddof=1) of the series ``simulate_ar1`` would return.

    Streams over the trajectory, so long runs never hold the series in memory.
    """
    if burn_in is None:
        burn_in = default_burn_in(a.s) if isinstance(a, CouplingMatrix) else 1000
    entries = _check_sim_args(a, t_len, burn_in)
    n = entries.shape[0]
    s1 = np.zeros(n)
    s2 = np.zeros((n, n))
    pos = -burn_in
    for block in _iter_ar1(entries, burn_in + t_len, seed):
        lo, hi = pos, pos + block.shape[0]
        if hi > 0:
            kept = block[max(0, -lo):]
            s1 += kept.sum(axis=0)
            s2 += kept.T @ kept
        pos = hi
    mean = s1 / t_len
    return (s2 - t_len * np.outer(mean, mean)) / (t_len - 1)


def asymptotic_covariance(a: CouplingMatrix) -> CovarianceMatrix:
    """Stationary covariance: the solution of (I - A^2) Sigma = I."""
    entries = _entries(a)
    n = entries.shape[0]
    m = np.eye(n) - entries @ entries
    ev = np.abs(np.linalg.eigvalsh(0.5 * (m + m.T)))
    # I has unit scale, so 1/min|ev| bounds the amplification of round-off
    lo, hi = float(ev.min()), float(ev.max())
    cond = hi / lo if lo > 0 else np.inf
    if lo <= 1.0 / MAX_CONDITION or cond > MAX_CONDITION:
        raise NumericalError(f"I - A^2 is near-singular (smallest eigenvalue {lo:.3e}, "
                             f"condition number {cond:.3e})")
    sigma = np.linalg.solve(m, np.eye(n))
    sigma = 0.5 * (sigma + sigma.T)
    return CovarianceMatrix(sigma)


def neumann_partial_sum(a: CouplingMatrix, k: int) -> CovarianceMatrix:
    """sum_{i=0}^{k-1} A^{2i}."""
    if k < 1:
        raise InvalidArgument(f"k must be >= 1, got {k}")
    entries = _entries(a)
    a2 = entries @ entries
    term = np.eye(entries.shape[0])
    total = term.copy()
    for _ in range(k - 1):
        term = term @ a2
        total += term
    return CovarianceMatrix(total)


def cov_to_corr(sigma: CovarianceMatrix):
    """Normalize a covariance matrix by its diagonal."""
    from .fc import CorrelationMatrix

    entries = _entries(sigma)
    d = np.diag(entries)
    if np.any(d <= 0):
        bad = int(np.flatnonzero(d <= 0)[0])
        raise InvalidArgument(f"non-positive variance at node {bad}")
    sd = np.sqrt(d)
    corr = entries / np.outer(sd, sd)
    corr = 0.5 * (corr + corr.T)
    np.clip(corr, -1.0, 1.0, out=corr)
    np.fill_diagonal(corr, 1.0)
    return CorrelationMatrix(corr)
