"""Network layers: generators, centrality measures, and the multiplex container.

Graphs are simple, undirected, and immutable after construction. Node indices
are contiguous 0..n-1. Generators are deterministic functions of their
parameters and seed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse

from .errors import InvalidArgumentError

__all__ = [
    "Graph",
    "MultiplexNetwork",
    "generate_ba",
    "generate_ws",
    "degree_sequence",
    "betweenness",
    "clustering_coefficients",
    "build_multiplex",
    "write_edge_list",
    "read_edge_list",
]


class Graph:
    """Simple undirected graph backed by adjacency lists.

    Safe for concurrent reads; never mutated after __init__.
    """

    def __init__(self, node_count: int, edges):
        if node_count < 0:
            raise InvalidArgumentError(f"node_count must be >= 0, got {node_count}")
        self.node_count = int(node_count)
        adj = [set() for _ in range(self.node_count)]
        edge_set = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidArgumentError(f"self-loop ({i},{i}) not allowed")
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise InvalidArgumentError(
                    f"edge ({i},{j}) out of range for {self.node_count} nodes"
                )
            if i > j:
                i, j = j, i
            if (i, j) in edge_set:
                continue
            edge_set.add((i, j))
            adj[i].add(j)
            adj[j].add(i)
        self._edge_set = frozenset(edge_set)
        self._adj = [np.array(sorted(s), dtype=np.int64) for s in adj]
        self._adj_sets = [frozenset(s) for s in adj]
        self._csr = None

    @property
    def edge_count(self) -> int:
        return len(self._edge_set)

    def neighbors(self, i: int) -> np.ndarray:
        return self._adj[i]

    def neighbor_set(self, i: int) -> frozenset:
        return self._adj_sets[i]

    def has_edge(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        return (i, j) in self._edge_set

    def edges(self):
        """Iterate canonical (i, j) pairs with i < j, sorted."""
        return iter(sorted(self._edge_set))

    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency as CSR (cached)."""
        if self._csr is None:
            n = self.node_count
            indptr = np.zeros(n + 1, dtype=np.int64)
            for i in range(n):
                indptr[i + 1] = indptr[i] + len(self._adj[i])
            indices = (
                np.concatenate(self._adj) if indptr[-1] else np.empty(0, dtype=np.int64)
            )
            data = np.ones(indptr[-1], dtype=np.float64)
            self._csr = sparse.csr_matrix((data, indices, indptr), shape=(n, n))
        return self._csr

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.node_count == other.node_count
            and self._edge_set == other._edge_set
        )

    def __repr__(self):
        return f"Graph(n={self.node_count}, edges={self.edge_count})"


@dataclass(frozen=True)
class MultiplexNetwork:
    """Two layers over one node set: awareness (information) and contact (disease)."""

    awareness_layer: Graph
    contact_layer: Graph

    def __post_init__(self):
        if self.awareness_layer.node_count != self.contact_layer.node_count:
            raise InvalidArgumentError(
                "layer size mismatch: "
                f"{self.awareness_layer.node_count} != {self.contact_layer.node_count}"
            )

    @property
    def node_count(self) -> int:
        return self.awareness_layer.node_count


def build_multiplex(a: Graph, b: Graph) -> MultiplexNetwork:
    return MultiplexNetwork(awareness_layer=a, contact_layer=b)


def generate_ba(n: int, m: int, seed=None) -> Graph:
    """Barabasi-Albert preferential attachment graph.

    Starts from a complete graph on m nodes; each subsequent node attaches to
    m distinct existing nodes with probability proportional to current degree.
    """
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    if n < m:
        raise InvalidArgumentError(f"need n >= m, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    edges = []
    # One entry per edge endpoint; sampling from it is degree-proportional.
    repeated: list[int] = []
    for i in range(m):
        for j in range(i + 1, m):
            edges.append((i, j))
            repeated.append(i)
            repeated.append(j)
    for v in range(m, n):
        chosen: set[int] = set()
        if repeated:
            while len(chosen) < m:
                chosen.add(repeated[int(rng.integers(len(repeated)))])
        else:
            # m=1 starts with an isolated node of degree 0; attach uniformly.
            while len(chosen) < m:
                chosen.add(int(rng.integers(v)))
        for t in sorted(chosen):
            edges.append((t, v))
            repeated.append(t)
            repeated.append(v)
    return Graph(n, edges)


def generate_ws(n: int, k: int, p: float, seed=None) -> Graph:
    """Watts-Strogatz small-world graph.

    Ring lattice with k/2 neighbors per side; the far endpoint of each lattice
    edge is rewired with probability p to a uniform non-self, non-duplicate
    target. Edge count is exactly n*k/2 for every p.
    """
    if k % 2 != 0:
        raise InvalidArgumentError(f"k must be even, got {k}")
    if k >= n:
        raise InvalidArgumentError(f"need n > k, got n={n}, k={k}")
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"p must be in [0,1], got {p}")
    rng = np.random.default_rng(seed)
    adj = [set() for _ in range(n)]
    for d in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + d) % n
            adj[i].add(j)
            adj[j].add(i)
    for d in range(1, k // 2 + 1):
        for i in range(n):
            if rng.random() >= p:
                continue
            if len(adj[i]) >= n - 1:
                continue
            j = (i + d) % n
            w = int(rng.integers(n))
            while w == i or w in adj[i]:
                w = int(rng.integers(n))
            adj[i].discard(j)
            adj[j].discard(i)
            adj[i].add(w)
            adj[w].add(i)
    edges = [(i, j) for i in range(n) for j in adj[i] if i < j]
    return Graph(n, edges)


def degree_sequence(g: Graph) -> np.ndarray:
    """Per-node neighbor counts."""
    return np.array([len(g.neighbors(i)) for i in range(g.node_count)], dtype=np.int64)


def betweenness(g: Graph, exact: bool = False):
    """Unnormalized betweenness centrality, ordered-pair convention.

    BC_i sums n_st^i / g_st over ordered pairs (s, t), s != t, both != i,
    counting shortest paths only; disconnected pairs contribute 0. Computed
    with Brandes' dependency accumulation.

    With exact=True all arithmetic uses Fractions and a list of Fractions is
    returned; otherwise a float array.
    """
    n = g.node_count
    zero = Fraction(0) if exact else 0.0
    bc = [zero] * n
    for s in range(n):
        order = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [zero] * n
        sigma[s] = Fraction(1) if exact else 1.0
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in g.neighbors(v):
                w = int(w)
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] = sigma[w] + sigma[v]
                    preds[w].append(v)
        delta = [zero] * n
        while order:
            w = order.pop()
            for v in preds[w]:
                delta[v] = delta[v] + (sigma[v] / sigma[w]) * (1 + delta[w])
            if w != s:
                # Each source contributes the one-directional count; looping
                # over every s yields the ordered-pair total.
                bc[w] = bc[w] + delta[w]
    if exact:
        return bc
    return np.array(bc, dtype=np.float64)


def clustering_coefficients(g: Graph) -> np.ndarray:
    """Local clustering: triangle density among each node's neighbors.

    C_i = 2 * links(nbrs(i)) / (deg_i * (deg_i - 1)); zero when deg_i <= 1.
    """
    n = g.node_count
    out = np.zeros(n, dtype=np.float64)
    for i in range(n):
        nbrs = g.neighbors(i)
        d = len(nbrs)
        if d < 2:
            continue
        nbr_set = g.neighbor_set(i)
        links = 0
        for u in nbrs:
            links += sum(1 for w in g.neighbors(int(u)) if w > u and w in nbr_set)
        out[i] = 2.0 * links / (d * (d - 1))
    return out


def write_edge_list(g: Graph, path) -> None:
    """Write the canonical edge-list text format: header `# nodes=N`, then `i j` lines."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# nodes={g.node_count}\n")
        for i, j in g.edges():
            fh.write(f"{i} {j}\n")


def read_edge_list(path) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if not header.startswith("# nodes="):
            raise InvalidArgumentError(f"{path}: missing '# nodes=<N>' header")
        try:
            n = int(header.split("=", 1)[1])
        except ValueError as exc:
            raise InvalidArgumentError(f"{path}: bad node count in header") from exc
        edges = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidArgumentError(f"{path}:{lineno}: expected 'i j'")
            edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges)
