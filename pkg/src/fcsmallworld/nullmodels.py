"""Random-graph null models and the relative small-world indices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgument
from .graph import BinaryGraph, GraphMetrics, metrics
from .rng import make_rng

NULL_MODELS = ("er", "maslov_sneppen")
DEFAULT_SWAP_FACTOR = 10.0
ATTEMPTS_PER_EDGE = 100


@dataclass(frozen=True)
class SmallWorldIndices:
    gamma: float | None
    lambda_: float | None
    sigma: float | None
    null_model: str = "er"
    null_seed: int | None = None

    def as_record(self) -> dict:
        """Flat text record; undefined values become the string ``undefined``."""
        def fmt(v):
            return "undefined" if v is None else repr(float(v))
        return {
            "gamma": fmt(self.gamma),
            "lambda": fmt(self.lambda_),
            "sigma": fmt(self.sigma),
            "null_model": self.null_model,
            "null_seed": "undefined" if self.null_seed is None else str(self.null_seed),
        }


@dataclass(frozen=True, eq=False)
class Rewired:
    graph: BinaryGraph
    swaps_done: int
    swaps_requested: int
    attempts: int

    @property
    def partial(self) -> bool:
        """True when the attempt cap stopped the chain early."""
        return self.swaps_done < self.swaps_requested


def _from_pair_index(n: int, picks: np.ndarray) -> BinaryGraph:
    iu, ju = np.triu_indices(n, k=1)
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[picks], ju[picks]] = True
    return BinaryGraph(adj | adj.T)


def er_matched(g: BinaryGraph, seed: int) -> BinaryGraph:
    """Uniform random graph on ``g.n`` nodes with exactly ``g.n_edges`` edges."""
    n = g.n
    pairs = n * (n - 1) // 2
    picks = make_rng(seed).choice(pairs, size=g.n_edges, replace=False)
    return _from_pair_index(n, picks)


def er_gnp(g: BinaryGraph, seed: int) -> BinaryGraph:
    """G(n, p) with p set to the density of ``g``; the edge count varies."""
    n = g.n
    pairs = n * (n - 1) // 2
    draws = make_rng(seed).random(pairs) < g.density()
    return _from_pair_index(n, np.flatnonzero(draws))


def maslov_sneppen(g: BinaryGraph, swap_factor: float = DEFAULT_SWAP_FACTOR,
                   seed: int = None) -> Rewired:
    """Degree-preserving randomization by double-edge swaps.

    Two edges {a,b}, {c,d} with four distinct endpoints become {a,d}, {c,b}
    when neither new edge exists. The chain runs until
    ``ceil(swap_factor * |E|)`` swaps succeed; each batch of ``|E|`` swaps may
    use at most ``100 |E|`` attempts, after which it stops and the result is
    flagged partial.
    """
    if swap_factor <= 0:
        raise InvalidArgument(f"swap_factor must be positive, got {swap_factor}")
    m = g.n_edges
    if m < 2:
        raise InvalidArgument(f"double-edge swaps need at least 2 edges, got {m}")
    n = g.n
    required = math.ceil(swap_factor * m)
    if m == n * (n - 1) // 2:
        # complete graph: every candidate edge already exists
        return Rewired(g, 0, required, 0)

    edges = [list(e) for e in g.edges()]
    present = {a * n + b for a, b in edges}
    rng = make_rng(seed)
    cap = ATTEMPTS_PER_EDGE * m
    done = attempts = batch_attempts = 0
    block = 4096
    while done < required:
        picks = rng.integers(0, m, size=(block, 2)).tolist()
        flips = rng.integers(0, 2, size=block).tolist()
        for (i1, i2), flip in zip(picks, flips):
            attempts += 1
            batch_attempts += 1
            a, b = edges[i1]
            c, d = edges[i2]
            if flip:
                c, d = d, c
            if a == c or a == d or b == c or b == d:
                pass
            else:
                ad = a * n + d if a < d else d * n + a
                cb = c * n + b if c < b else b * n + c
                if ad not in present and cb not in present:
                    present.discard(a * n + b if a < b else b * n + a)
                    present.discard(c * n + d if c < d else d * n + c)
                    present.add(ad)
                    present.add(cb)
                    edges[i1] = [a, d]
                    edges[i2] = [c, b]
                    done += 1
                    if done % m == 0:
                        batch_attempts = 0
                    if done >= required:
                        break
            if batch_attempts >= cap:
                break
        if batch_attempts >= cap:
            break
    return Rewired(BinaryGraph.from_edges(n, edges), done, required, attempts)


def small_world(g: BinaryGraph, null: BinaryGraph | Sequence[BinaryGraph],
                null_model: str = "er", null_seed: int | None = None,
                g_metrics: GraphMetrics | None = None,
                null_metrics: Sequence[GraphMetrics] | None = None) -> SmallWorldIndices:
    """gamma = C/C_null, lambda = L/L_null, sigma = gamma/lambda.

    Several null graphs may be given; their clustering and path lengths are
    averaged first. Any index whose denominator is zero or undefined is None.
    """
    nulls = [null] if isinstance(null, BinaryGraph) else list(null)
    if not nulls:
        raise InvalidArgument("at least one null graph is required")
    for h in nulls:
        if h.n != g.n:
            raise InvalidArgument(f"null graph has {h.n} nodes, graph has {g.n}")
    gm = g_metrics if g_metrics is not None else metrics(g)
    nms = list(null_metrics) if null_metrics is not None else [metrics(h) for h in nulls]

    c_null = math.fsum(m.clustering for m in nms) / len(nms)
    l_vals = [m.avg_path_length for m in nms]
    l_null = None if any(v is None for v in l_vals) else math.fsum(l_vals) / len(l_vals)

    gamma = gm.clustering / c_null if c_null > 0 else None
    lam = None
    if gm.avg_path_length is not None and l_null is not None and l_null > 0:
        lam = gm.avg_path_length / l_null
    sigma = gamma / lam if gamma is not None and lam is not None and lam > 0 else None
    return SmallWorldIndices(gamma, lam, sigma, null_model, null_seed)
