"""
Graph Topology
==============
Communication graphs, hop distances, neighbourhoods N_{<=d} and the
shared rooted spanning tree used by the tree-based policies.

Graph families come from networkx; distances are precomputed once into
an m x m numpy matrix by m BFS passes.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

FAMILIES = ["line", "cycle", "star", "grid", "complete", "random-connected", "random-tree"]
ALIASES = {"path": "line", "randomConnected": "random-connected", "randomTree": "random-tree"}


@dataclass(frozen=True)
class CommGraph:
    """Undirected connected graph with sorted adjacency and all-pairs distances."""
    m: int
    adjacency: tuple                 # per-vertex sorted neighbour tuples
    dist: np.ndarray                 # m x m hop distances
    name: str = "custom"

    @property
    def diameter(self) -> int:
        return int(self.dist.max())

    @property
    def num_edges(self) -> int:
        return sum(len(n) for n in self.adjacency) // 2

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def edges(self) -> List[tuple]:
        return [(v, u) for v in range(self.m) for u in self.adjacency[v] if v < u]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.m))
        g.add_edges_from(self.edges())
        return g


@dataclass(frozen=True)
class SpanningTree:
    """BFS tree rooted at `root`, identical for all agents."""
    root: int
    parent: tuple                    # parent[root] is None
    depth: tuple
    tree_dist: np.ndarray            # m x m distances inside the tree

    @property
    def m(self) -> int:
        return len(self.parent)

    def children(self, v: int) -> tuple:
        return tuple(u for u in range(self.m) if self.parent[u] == v)

    def neighbors(self, v: int) -> tuple:
        """Tree neighbours of v in ascending order."""
        nbrs = set(self.children(v))
        if self.parent[v] is not None:
            nbrs.add(self.parent[v])
        return tuple(sorted(nbrs))

    def ancestors(self, v: int) -> List[int]:
        """Ancestors of v from its parent up to the root."""
        chain = []
        p = self.parent[v]
        while p is not None:
            chain.append(p)
            p = self.parent[p]
        return chain

    def path(self, v: int, u: int) -> List[int]:
        """Vertices on the unique tree path from v to u, endpoints included."""
        up_v = [v] + self.ancestors(v)
        up_u = [u] + self.ancestors(u)
        on_u = set(up_u)
        lca = next(x for x in up_v if x in on_u)
        left = up_v[:up_v.index(lca) + 1]
        right = up_u[:up_u.index(lca)]
        return left + right[::-1]

    def as_graph(self) -> CommGraph:
        """The tree viewed as a communication graph (for Coop-SE on tree edges)."""
        g = nx.Graph()
        g.add_nodes_from(range(self.m))
        g.add_edges_from((v, p) for v, p in enumerate(self.parent) if p is not None)
        return from_networkx(g, name="tree")


# ═══════════════════════════════════════════════════════════════════════
# CONSTRUCTION
# ═══════════════════════════════════════════════════════════════════════

def from_networkx(g: nx.Graph, name: str = "custom") -> CommGraph:
    """
    Freeze a networkx graph into a CommGraph.

    Raises:
        ValueError: self-loops or a disconnected graph.
    """
    m = g.number_of_nodes()
    if m < 1:
        raise ValueError("A communication graph needs at least one vertex")
    if sorted(g.nodes) != list(range(m)):
        g = nx.convert_node_labels_to_integers(g, ordering="sorted")
    if nx.number_of_selfloops(g):
        raise ValueError("Self-loops are not allowed in a communication graph")
    if not nx.is_connected(g):
        raise ValueError(f"Graph '{name}' is not connected")

    dist = np.zeros((m, m), dtype=np.int64)
    for v, lengths in nx.all_pairs_shortest_path_length(g):
        for u, d in lengths.items():
            dist[v, u] = d
    adjacency = tuple(tuple(sorted(g.neighbors(v))) for v in range(m))
    return CommGraph(m=m, adjacency=adjacency, dist=dist, name=name)


def _grid_shape(m: int, rows: Optional[int], cols: Optional[int]) -> tuple:
    if rows and cols:
        if rows * cols != m:
            raise ValueError(f"grid {rows}x{cols} does not have m={m} vertices")
        return rows, cols
    side = math.isqrt(m)
    if side * side != m:
        raise ValueError(f"grid needs a perfect-square m or explicit rows x cols, got m={m}")
    return side, side


def generate(topology: str, m: int, rng: Optional[np.random.Generator] = None,
             p: Optional[float] = None, rows: Optional[int] = None,
             cols: Optional[int] = None) -> CommGraph:
    """
    Build a connected graph of the named family.

    Args:
        topology: line | cycle | star | grid | complete | random-connected | random-tree
        m: number of vertices (agents)
        rng: generator for the random families
        p: edge probability for random-connected (default 2 ln m / m)
        rows, cols: explicit grid shape

    Raises:
        ValueError: unknown family or an m the family cannot have.
    """
    family = ALIASES.get(topology, topology)
    if family not in FAMILIES:
        raise ValueError(f"Unknown topology '{topology}'. Available: {FAMILIES}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rng = rng if rng is not None else np.random.default_rng(0)

    if family == "line":
        g = nx.path_graph(m)
    elif family == "cycle":
        if m < 3:
            raise ValueError(f"cycle needs m >= 3, got {m}")
        g = nx.cycle_graph(m)
    elif family == "star":
        g = nx.star_graph(m - 1)
    elif family == "grid":
        r, c = _grid_shape(m, rows, cols)
        g = nx.convert_node_labels_to_integers(nx.grid_2d_graph(r, c), ordering="sorted")
    elif family == "complete":
        g = nx.complete_graph(m)
    elif family == "random-tree":
        g = _random_tree(m, rng)
    else:
        g = _random_connected(m, rng, p)

    graph = from_networkx(g, name=family)
    logger.debug("Generated %s graph: m=%d, edges=%d, diameter=%d",
                 family, graph.m, graph.num_edges, graph.diameter)
    return graph


def _random_tree(m: int, rng: np.random.Generator) -> nx.Graph:
    if m <= 2:
        return nx.path_graph(m)
    sequence = [int(x) for x in rng.integers(0, m, size=m - 2)]
    return nx.from_prufer_sequence(sequence)


def _random_connected(m: int, rng: np.random.Generator, p: Optional[float]) -> nx.Graph:
    """Erdős–Rényi draw, augmented with one edge per extra component."""
    if p is None:
        p = min(1.0, 2.0 * math.log(max(m, 2)) / max(m, 1))
    g = nx.gnp_random_graph(m, p, seed=int(rng.integers(0, 2**31 - 1)))
    components = [sorted(c) for c in nx.connected_components(g)]
    components.sort(key=lambda c: c[0])
    for left, right in zip(components, components[1:]):
        u = left[int(rng.integers(0, len(left)))]
        v = right[int(rng.integers(0, len(right)))]
        g.add_edge(u, v)
    return g


def load_edge_list(path) -> CommGraph:
    """
    Load a graph from a text file: first line "m", then one "u v" pair
    per line, 0-indexed. Blank lines and '#' comments are skipped.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"Edge-list file '{path}' is empty")
    m = int(lines[0])
    g = nx.Graph()
    g.add_nodes_from(range(m))
    for ln in lines[1:]:
        u, v = (int(x) for x in ln.split())
        if not (0 <= u < m and 0 <= v < m):
            raise ValueError(f"Edge ({u}, {v}) out of range for m={m}")
        g.add_edge(u, v)
    return from_networkx(g, name=Path(path).stem)


# ═══════════════════════════════════════════════════════════════════════
# QUERIES
# ═══════════════════════════════════════════════════════════════════════

def neighborhood_size(g: CommGraph, v: int, d: float) -> int:
    """|N_{<=d}(v)|, counting v itself; fractional d floors."""
    if not 0 <= v < g.m:
        raise ValueError(f"Vertex {v} out of range for m={g.m}")
    radius = math.floor(d)
    return int(np.count_nonzero(g.dist[v] <= radius))


def neighborhood(g: CommGraph, v: int, d: float) -> np.ndarray:
    """Vertices of N_{<=d}(v) in ascending order."""
    return np.flatnonzero(g.dist[v] <= math.floor(d))


def build_spanning_tree(g: CommGraph, root: int = 0) -> SpanningTree:
    """
    BFS tree from `root`, neighbours explored in ascending index order,
    so identical inputs give identical parent arrays.
    """
    if not 0 <= root < g.m:
        raise ValueError(f"Root {root} out of range for m={g.m}")
    parent: List[Optional[int]] = [None] * g.m
    depth = [0] * g.m
    for u, v in nx.bfs_edges(g.to_networkx(), root, sort_neighbors=sorted):
        parent[v] = u
        depth[v] = depth[u] + 1

    tree = nx.Graph()
    tree.add_nodes_from(range(g.m))
    tree.add_edges_from((v, p) for v, p in enumerate(parent) if p is not None)
    tree_dist = np.zeros((g.m, g.m), dtype=np.int64)
    for v, lengths in nx.all_pairs_shortest_path_length(tree):
        for u, d in lengths.items():
            tree_dist[v, u] = d
    return SpanningTree(root=root, parent=tuple(parent), depth=tuple(depth), tree_dist=tree_dist)


def check_min_neighborhood(g: CommGraph) -> int:
    """Count (v, tau) pairs with |N_{<=tau}(v)| < min(tau, m); 0 on a connected graph."""
    violations = 0
    for v in range(g.m):
        for tau in range(g.diameter + 2):
            if neighborhood_size(g, v, tau) < min(tau, g.m):
                violations += 1
    return violations
