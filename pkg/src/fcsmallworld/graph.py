"""Unweighted-graph metrics on dense boolean adjacency matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument

UNREACHABLE = -1


@dataclass(frozen=True, eq=False)
class BinaryGraph:
    """Simple undirected graph stored as a symmetric boolean matrix."""

    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adjacency)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InvalidArgument("adjacency must be square")
        if adj.dtype != bool:
            if not np.all((adj == 0) | (adj == 1)):
                raise InvalidArgument("adjacency entries must be 0 or 1")
            adj = adj.astype(bool)
        if not np.array_equal(adj, adj.T):
            raise InvalidArgument("adjacency must be symmetric")
        if adj.diagonal().any():
            raise InvalidArgument("self-loops are not allowed")
        adj = adj.copy()
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_edges(cls, n: int, edges) -> "BinaryGraph":
        adj = np.zeros((n, n), dtype=bool)
        seen = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidArgument(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise InvalidArgument(f"self-loop at node {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InvalidArgument(f"duplicate edge {key}")
            seen.add(key)
            adj[i, j] = adj[j, i] = True
        return cls(adj)

    @classmethod
    def empty(cls, n: int) -> "BinaryGraph":
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def complete(cls, n: int) -> "BinaryGraph":
        return cls(~np.eye(n, dtype=bool))

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, k=1)))

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adjacency, k=1))
        return list(zip(iu.tolist(), ju.tolist()))

    def density(self) -> float:
        pairs = self.n * (self.n - 1) // 2
        return self.n_edges / pairs if pairs else 0.0

    def relabel(self, perm) -> "BinaryGraph":
        """Graph with node ``i`` renamed ``perm[i]``."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.size)
        return BinaryGraph(self.adjacency[np.ix_(inv, inv)])

    def __eq__(self, other):
        return isinstance(other, BinaryGraph) and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash(self.adjacency.tobytes())


@dataclass(frozen=True)
class GraphMetrics:
    clustering: float
    avg_path_length: float | None
    density: float
    n_components: int
    finite_pair_fraction: float
    degree_sequence: tuple[int, ...]


def degrees(g: BinaryGraph) -> list[int]:
    return g.adjacency.sum(axis=1).astype(int).tolist()


def _triangles_per_node(g: BinaryGraph) -> np.ndarray:
    # diag(A^3) counts closed walks i->j->l->i, i.e. 2 x triangles through i
    a = g.adjacency.astype(np.float64)
    return np.einsum("ij,ji->i", a @ a, a)


def _local_from_closed(closed: np.ndarray, k: np.ndarray) -> np.ndarray:
    c = np.zeros(k.shape, dtype=float)
    ok = k >= 2
    c[ok] = closed[ok] / (k[ok] * (k[ok] - 1.0))
    return c


def local_clustering(g: BinaryGraph, i: int) -> float:
    if not 0 <= i < g.n:
        raise InvalidArgument(f"node index {i} out of range for n={g.n}")
    nbrs = np.flatnonzero(g.adjacency[i])
    k = nbrs.size
    if k < 2:
        return 0.0
    links = int(np.count_nonzero(g.adjacency[np.ix_(nbrs, nbrs)]))  # ordered pairs
    return links / (k * (k - 1))


def local_clustering_all(g: BinaryGraph) -> np.ndarray:
    k = g.adjacency.sum(axis=1).astype(float)
    return _local_from_closed(_triangles_per_node(g), k)


def clustering(g: BinaryGraph) -> float:
    """Mean local clustering over all nodes, degree-0/1 nodes counting as 0."""
    if g.n == 0:
        return 0.0
    # fsum is correctly rounded, so the result does not depend on summation order
    return math.fsum(local_clustering_all(g).tolist()) / g.n


def shortest_path_lengths(g: BinaryGraph) -> np.ndarray:
    """All-pairs hop distances; ``UNREACHABLE`` (-1) marks disconnected pairs.

    Level-synchronous BFS run from every source at once: the frontier matrix
    row ``i`` holds the nodes first reached from ``i`` at the current depth.
    """
    n = g.n
    dist = np.full((n, n), UNREACHABLE, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    a = g.adjacency.astype(np.float32)
    reached = np.eye(n, dtype=bool)
    frontier = np.eye(n, dtype=np.float32)
    depth = 0
    while True:
        depth += 1
        nxt = ((frontier @ a) > 0) & ~reached
        if not nxt.any():
            break
        dist[nxt] = depth
        reached |= nxt
        frontier = nxt.astype(np.float32)
    return dist


def connected_components(g: BinaryGraph) -> tuple[np.ndarray, int]:
    """Component label per node (labels ordered by smallest member) and count."""
    labels = np.full(g.n, -1, dtype=np.int64)
    count = 0
    adj = g.adjacency
    for start in range(g.n):
        if labels[start] >= 0:
            continue
        labels[start] = count
        stack = [start]
        while stack:
            u = stack.pop()
            for v in np.flatnonzero(adj[u] & (labels < 0)):
                labels[v] = count
                stack.append(int(v))
        count += 1
    return labels, count


def avg_path_length(g: BinaryGraph, dist: np.ndarray | None = None,
                    largest_component: bool = False) -> tuple[float | None, float]:
    """Mean hop distance over node pairs joined by a path.

    Returns ``(L, finite_pair_fraction)``; ``L`` is None when no pair is
    connected. Ordered and unordered pair means coincide for undirected
    graphs. With ``largest_component`` the mean is taken inside the largest
    component only (ties broken by lowest label).
    """
    n = g.n
    if n < 2:
        return None, 1.0
    if dist is None:
        dist = shortest_path_lengths(g)
    iu = np.triu_indices(n, k=1)
    d = dist[iu]
    finite = d > 0
    frac = float(np.count_nonzero(finite)) / d.size
    if largest_component:
        labels, _ = connected_components(g)
        big = int(np.argmax(np.bincount(labels)))
        inside = (labels[iu[0]] == big) & (labels[iu[1]] == big)
        d = d[inside]
        finite = d > 0
    if not finite.any():
        return None, frac
    return float(d[finite].mean()), frac


def metrics(g: BinaryGraph, largest_component: bool = False) -> GraphMetrics:
    dist = shortest_path_lengths(g)
    L, frac = avg_path_length(g, dist, largest_component=largest_component)
    _, ncomp = connected_components(g)
    return GraphMetrics(
        clustering=clustering(g),
        avg_path_length=L,
        density=g.density(),
        n_components=ncomp,
        finite_pair_fraction=frac,
        degree_sequence=tuple(degrees(g)),
    )
