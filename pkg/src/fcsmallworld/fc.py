"""Correlation-based functional connectivity: Pearson matrices and density thresholding."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeries, InvalidArgument
from .graph import BinaryGraph
from .rng import make_rng

_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    entries: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.entries, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise InvalidArgument("correlation matrix must be square")
        if not np.allclose(c, c.T, rtol=0.0, atol=_TOL):
            raise InvalidArgument("correlation matrix must be symmetric")
        if not np.allclose(np.diag(c), 1.0, rtol=0.0, atol=_TOL):
            raise InvalidArgument("correlation matrix must have unit diagonal")
        if np.any(np.abs(c) > 1.0 + _TOL):
            raise InvalidArgument("correlation entries must lie in [-1, 1]")
        object.__setattr__(self, "entries", c)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class Binarized:
    """A thresholded correlation matrix plus the density bookkeeping."""

    graph: BinaryGraph
    requested_density: float
    achieved_density: float
    n_edges: int
    tie_seed: int

    @property
    def empty(self) -> bool:
        return self.n_edges == 0


def pearson_matrix(ts) -> CorrelationMatrix:
    """Sample Pearson correlation between the rows of an n x T array (or a TimeSeriesSample)."""
    x = np.asarray(getattr(ts, "values", ts), dtype=float)
    if x.ndim != 2:
        raise InvalidArgument("time series must be a 2-D array (nodes x time)")
    n, t_len = x.shape
    if t_len < 3:
        raise InvalidArgument(f"need at least 3 time points, got {t_len}")
    xc = x - x.mean(axis=1, keepdims=True)
    cov = (xc @ xc.T) / (t_len - 1)
    var = np.diag(cov).copy()
    # a constant series can leave round-off residue; compare against the data scale
    scale = np.maximum(np.abs(x).max(axis=1), 1.0) ** 2
    flat = var <= 1e-24 * scale
    if flat.any():
        raise DegenerateSeries(int(np.flatnonzero(flat)[0]))
    sd = np.sqrt(var)
    corr = cov / np.outer(sd, sd)
    corr = 0.5 * (corr + corr.T)
    np.clip(corr, -1.0, 1.0, out=corr)
    np.fill_diagonal(corr, 1.0)
    return CorrelationMatrix(corr)


def edge_count_for_density(n: int, p_fc: float) -> int:
    """round(p_fc * n(n-1)/2), halves rounded away from zero."""
    return int(math.floor(p_fc * (n * (n - 1) // 2) + 0.5))


def binarize_to_density(c, p_fc: float, tie_seed: int, absolute: bool = False) -> Binarized:
    """Keep the ``m`` pairs with the largest correlation.

    Pairs are ranked by correlation (or ``|correlation|`` with ``absolute``),
    largest first. Equal values are ordered by a random permutation of the
    pair indices drawn from ``tie_seed``, so the pick at the cut rank is
    reproducible but not biased toward low node indices.
    """
    entries = np.asarray(getattr(c, "entries", c), dtype=float)
    n = entries.shape[0]
    if n < 2:
        raise InvalidArgument(f"need at least 2 nodes, got {n}")
    if not 0.0 < p_fc <= 1.0:
        raise InvalidArgument(f"p_fc must lie in (0, 1], got {p_fc}")
    iu, ju = np.triu_indices(n, k=1)
    vals = entries[iu, ju]
    if absolute:
        vals = np.abs(vals)
    m = edge_count_for_density(n, p_fc)
    priority = make_rng(tie_seed).permutation(vals.size)
    order = np.lexsort((priority, -vals))
    pick = order[:m]
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[pick], ju[pick]] = True
    adj |= adj.T
    return Binarized(
        graph=BinaryGraph(adj),
        requested_density=float(p_fc),
        achieved_density=m / vals.size,
        n_edges=m,
        tie_seed=tie_seed,
    )


def transitivity_violations(c, tol: float = 0.0) -> list[tuple[int, int, int]]:
    """Ordered triples (i, j, k) of distinct nodes with r_ij^2 + r_jk^2 > 1 but r_ik <= 0.

    ``r_ik`` values with ``|r_ik| < tol`` count as zero-but-harmless, so a
    positive ``tol`` absorbs round-off on correlations that are exactly zero
    in exact arithmetic.
    """
    r = np.asarray(getattr(c, "entries", c), dtype=float)
    n = r.shape[0]
    r2 = r * r
    bad_ik = r <= 0.0
    if tol > 0:
        bad_ik &= ~(np.abs(r) < tol)
    np.fill_diagonal(bad_ik, False)
    out = []
    for j in range(n):
        strong = r2[:, j][:, None] + r2[j, :][None, :] > 1.0
        strong[j, :] = False
        strong[:, j] = False
        hits = np.argwhere(strong & bad_ik)
        out.extend((int(i), j, int(k)) for i, k in hits)
    out.sort()
    return out
