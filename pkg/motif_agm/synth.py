"""Planted overlapping-community graphs with known ground truth.

Each vertex joins k communities (k >= 1 with mean A); every pair of
vertices sharing a community is linked with probability p_in, and every
pair at all with background probability p_out.
"""
from dataclasses import dataclass

import numpy as np

from motif_agm.cover import CommunityAssignment
from motif_agm.errors import GuardRefusal, ParameterError
from motif_agm.graph import Graph

MAX_EXPECTED_EDGES = 10 ** 7


@dataclass
class PlantedSpec:
    vertex_count: int
    community_count: int
    mean_memberships: float = 1.0
    heavy_tail: bool = False
    p_in: float = 0.5
    p_out: float = 0.0
    seed: int = 0

    def validate(self):
        if self.vertex_count < 2 or self.community_count < 1:
            raise ParameterError("need at least 2 vertices and 1 community")
        if not 1.0 <= self.mean_memberships <= self.community_count:
            raise ParameterError("mean memberships must lie in [1, C]")
        if not 0.0 <= self.p_out < self.p_in <= 1.0:
            raise ParameterError("probabilities must satisfy "
                                 "0 <= p_out < p_in <= 1")
        return self

    def expected_edges(self):
        size = self.vertex_count * self.mean_memberships / \
            self.community_count
        pairs = self.vertex_count * (self.vertex_count - 1) / 2.0
        return self.community_count * self.p_in * size * (size - 1) / 2.0 \
            + self.p_out * pairs


def membership_counts(spec, rng):
    """Memberships per vertex: 1 + Poisson(A - 1), or a geometric draw
    with mean A when a heavier tail is wanted; capped at C.
    """
    V, A = spec.vertex_count, spec.mean_memberships
    if spec.heavy_tail:
        counts = rng.geometric(1.0 / A, size=V)
    else:
        counts = 1 + rng.poisson(A - 1.0, size=V)
    return np.minimum(counts, spec.community_count)


def generate(spec):
    """Returns the planted graph and its ground-truth cover."""
    spec.validate()
    if spec.expected_edges() > MAX_EXPECTED_EDGES:
        raise GuardRefusal("expected %.3g edges exceeds the %d-edge limit"
                           % (spec.expected_edges(), MAX_EXPECTED_EDGES))
    rng = np.random.default_rng(spec.seed)
    V = spec.vertex_count

    members = [[] for _ in range(spec.community_count)]
    vertex_communities = []
    for v, k in enumerate(membership_counts(spec, rng)):
        chosen = rng.choice(spec.community_count, size=int(k), replace=False)
        vertex_communities.append(sorted(int(c) for c in chosen))
        for c in chosen:
            members[c].append(v)

    edges = set()
    for community in members:
        size = len(community)
        if size < 2:
            continue
        linked = np.triu(rng.random((size, size)) < spec.p_in, k=1)
        for i, j in zip(*np.nonzero(linked)):
            edges.add((community[i], community[j]))

    if spec.p_out > 0:
        count = rng.binomial(V * (V - 1) // 2, spec.p_out)
        for u, v in rng.integers(V, size=(count, 2)):
            if u != v:
                edges.add((int(min(u, v)), int(max(u, v))))

    degree = np.zeros(V, dtype=np.int64)
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    for v in np.flatnonzero(degree == 0):
        v = int(v)
        mates = [u for c in vertex_communities[v] for u in members[c]
                 if u != v]
        if not mates:
            mates = [u for u in range(V) if u != v]
        u = mates[rng.integers(len(mates))]
        edges.add((min(u, v), max(u, v)))
        degree[u] += 1
        degree[v] += 1

    g = Graph.from_edges(V, sorted(edges))
    return g, CommunityAssignment.from_sets(members, source='ground-truth')


def planted_statistics(g, truth):
    """V, E, C, average memberships per vertex (A) and the share of
    communities overlapping at least one other (P).
    """
    member_of = truth.memberships()
    overlapping = set()
    for communities in member_of.values():
        if len(communities) > 1:
            overlapping.update(communities)
    return {
        'V': g.vertex_count,
        'E': g.edge_count,
        'C': len(truth),
        'A': sum(len(c) for c in truth.communities) / float(g.vertex_count),
        'P': len(overlapping) / float(len(truth)) if len(truth) else 0.0,
    }
