from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from motif_agm.errors import ParameterError

MIN_CLIQUE_SIZE = 2
MAX_CLIQUE_SIZE = 6


class Graph(object):
    """Immutable undirected simple graph over compact vertex ids
    0..V-1.  Neighbor lists are sorted ascending; ``vertex_ids`` maps
    each compact id back to the id used in the input file.
    """

    def __init__(self, vertex_count, adjacency, vertex_ids=None):
        self.vertex_count = vertex_count
        self.adjacency = tuple(adjacency)
        self.neighbor_sets = tuple(frozenset(a.tolist())
                                   for a in self.adjacency)
        self.degrees = np.array([len(a) for a in self.adjacency],
                                dtype=np.int64)
        self.edge_count = int(self.degrees.sum()) // 2
        if vertex_ids is None:
            vertex_ids = np.arange(vertex_count, dtype=np.int64)
        self.vertex_ids = np.asarray(vertex_ids, dtype=np.int64)
        self.index_of = {int(v): i for i, v in enumerate(self.vertex_ids)}

    @classmethod
    def from_edges(cls, vertex_count, edges, vertex_ids=None):
        """Build a graph from (u, v) pairs over compact ids, dropping
        self-loops and duplicate or reversed edges.
        """
        neighbors = [set() for _ in range(vertex_count)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                continue
            neighbors[u].add(v)
            neighbors[v].add(u)
        adjacency = [np.array(sorted(n), dtype=np.int64) for n in neighbors]
        return cls(vertex_count, adjacency, vertex_ids)

    def neighbors(self, v):
        return self.adjacency[v]

    def degree(self, v):
        return int(self.degrees[v])

    def has_edge(self, u, v):
        return v in self.neighbor_sets[u]

    def is_clique(self, vertices):
        vertices = list(vertices)
        for i, u in enumerate(vertices):
            for v in vertices[i + 1:]:
                if u == v or not self.has_edge(u, v):
                    return False
        return True

    def edges(self):
        """All edges as (u, v) with u < v, in ascending order."""
        return [(u, int(v))
                for u in range(self.vertex_count)
                for v in self.adjacency[u] if u < v]

    def original_id(self, v):
        return int(self.vertex_ids[v])

    def __repr__(self):
        return "Graph(V=%d, E=%d)" % (self.vertex_count, self.edge_count)


@dataclass
class MotifSample:
    """An ordered vertex subset, either drawn from the observed motifs
    (``label`` True) or produced by the generator, in which case the
    walks that selected each vertex are kept for the policy gradient.
    """
    vertices: Tuple[int, ...]
    label: bool
    walks: list = field(default_factory=list)
    log_prob: float = 0.0


class CliqueIndex(object):
    """All m-cliques of a graph, stored as sorted vertex tuples, with a
    per-vertex index of the cliques covering each vertex.
    """

    def __init__(self, clique_size, cliques, vertex_count):
        self.clique_size = clique_size
        self.cliques = list(cliques)
        per_vertex = [[] for _ in range(vertex_count)]
        for i, clique in enumerate(self.cliques):
            for v in clique:
                per_vertex[v].append(i)
        self.per_vertex = [np.array(p, dtype=np.int64) for p in per_vertex]

    def __len__(self):
        return len(self.cliques)

    def covering(self, v):
        return [self.cliques[i] for i in self.per_vertex[v]]

    def covered_vertices(self):
        return [v for v, p in enumerate(self.per_vertex) if len(p)]

    @property
    def coverage(self):
        return len(self.covered_vertices())


def check_clique_size(m):
    if not MIN_CLIQUE_SIZE <= m <= MAX_CLIQUE_SIZE:
        raise ParameterError("clique size must be between %d and %d, got %d"
                             % (MIN_CLIQUE_SIZE, MAX_CLIQUE_SIZE, m))


def enumerate_cliques(g, m):
    """Enumerate every m-clique of ``g`` exactly once.

    Vertices are ranked by (degree, id) and each edge is oriented from
    lower to higher rank; a partial clique is only ever extended by
    common out-neighbors of all its members, so each clique is reached
    from its lowest-ranked vertex along a single path.
    """
    check_clique_size(m)
    rank = np.empty(g.vertex_count, dtype=np.int64)
    order = sorted(range(g.vertex_count), key=lambda v: (g.degree(v), v))
    rank[order] = np.arange(g.vertex_count)
    forward = [frozenset(int(u) for u in g.neighbors(v) if rank[u] > rank[v])
               for v in range(g.vertex_count)]

    found = []

    def extend(members, candidates):
        if len(members) == m:
            found.append(tuple(sorted(members)))
            return
        for u in candidates:
            extend(members + [u], candidates & forward[u])

    for v in range(g.vertex_count):
        extend([v], forward[v])

    found.sort()
    return CliqueIndex(m, found, g.vertex_count)


def sample_true_motif(idx, v_c, rng) -> Optional[MotifSample]:
    """Draw uniformly from the motifs covering ``v_c``, or None when no
    m-clique covers it.
    """
    covering = idx.per_vertex[v_c]
    if not len(covering):
        return None
    clique = idx.cliques[covering[rng.integers(len(covering))]]
    ordered = (v_c,) + tuple(v for v in clique if v != v_c)
    return MotifSample(vertices=ordered, label=True)
