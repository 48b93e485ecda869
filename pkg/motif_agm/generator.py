"""Motif generator: grows a vertex subset one vertex at a time, each by
a random walk rooted at a virtual vertex that stands for every vertex
selected so far.

The virtual vertex is adjacent to the union of the selected vertices'
neighborhoods and carries the entrywise product of their affiliation
vectors.  From the current vertex the walk moves to a neighbor with
probability proportional to that neighbor's chance of forming a clique
with the current vertex and the virtual vertex.  When the walk samples
the vertex it just came from, it stops and the current vertex is
selected; the probability of the walked path, including that final
move, is the probability of the selection.
"""
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from motif_agm.agm import OVERLAP_FLOOR, entrywise_product, partner_product
from motif_agm.errors import GenerationFailure, ParameterError
from motif_agm.graph import MotifSample

VIRTUAL = -1

DEFAULT_MAX_WALK = 10
DEFAULT_RESTARTS = 5


@dataclass
class VirtualVertex:
    member_vertices: Tuple[int, ...]
    neighbor_union: frozenset
    product_vector: np.ndarray

    @classmethod
    def build(cls, g, theta_G, members):
        members = tuple(int(v) for v in members)
        union = set()
        for v in members:
            union.update(g.neighbor_sets[v])
        return cls(members, frozenset(union),
                   entrywise_product(theta_G[list(members)]))


@dataclass
class WalkRecord:
    """One walk from the virtual vertex.  ``path`` starts with VIRTUAL;
    ``dead_end`` is set when the walk stopped at a vertex with no
    admissible neighbor, in which case there is no final stop move.
    """
    path: List[int]
    chosen: int
    log_prob: float
    members: Tuple[int, ...]
    dead_end: bool = False

    def transitions(self):
        moves = list(zip(self.path[:-1], self.path[1:]))
        if not self.dead_end:
            moves.append((self.path[-1], self.path[-2]))
        return moves


def candidates(g, v_v, current):
    """Admissible next vertices: the neighbors of the current vertex (of
    the virtual vertex at the start) that are not already selected.
    """
    excluded = set(v_v.member_vertices)
    if current == VIRTUAL:
        pool = sorted(v_v.neighbor_union - excluded)
    else:
        pool = [int(u) for u in g.neighbors(current) if u not in excluded]
    return np.array(pool, dtype=np.int64)


def _relevance_multiplier(theta_G, v_v, current):
    if current == VIRTUAL:
        return v_v.product_vector
    return v_v.product_vector * theta_G[current]


def relevance_distribution(g, theta_G, v_v, current):
    """Returns ``(candidates, probabilities)``; both are empty when the
    current vertex has nowhere to go.
    """
    cands = candidates(g, v_v, current)
    if not len(cands):
        return cands, np.zeros(0)
    s = theta_G[cands] @ _relevance_multiplier(theta_G, v_v, current)
    weights = -np.expm1(-np.maximum(s, OVERLAP_FLOOR))
    return cands, weights / weights.sum()


def random_walk(g, theta_G, v_v, max_walk, rng):
    """Walk from the virtual vertex; returns a WalkRecord, or None when
    the walk did not stop within ``max_walk`` moves.
    """
    path = [VIRTUAL]
    log_prob = 0.0
    for _ in range(max_walk):
        current = path[-1]
        cands, probs = relevance_distribution(g, theta_G, v_v, current)
        if not len(cands):
            if current == VIRTUAL:
                raise GenerationFailure(v_v.member_vertices[0])
            return WalkRecord(path, current, log_prob,
                              v_v.member_vertices, dead_end=True)
        i = rng.choice(len(cands), p=probs)
        log_prob += math.log(probs[i])
        nxt = int(cands[i])
        if len(path) >= 2 and nxt == path[-2]:
            return WalkRecord(path, current, log_prob, v_v.member_vertices)
        path.append(nxt)
    return None


def generate_subset(g, theta_G, v_c, m, max_walk=DEFAULT_MAX_WALK, rng=None,
                    restarts=DEFAULT_RESTARTS):
    """Generate an m-vertex subset rooted at ``v_c``.  Raises
    GenerationFailure when a walk cannot start or keeps overrunning
    ``max_walk`` after ``restarts`` retries.
    """
    if m < 2:
        raise ParameterError("subset size must be at least 2, got %d" % m)
    if rng is None:
        rng = np.random.default_rng()
    if g.degree(v_c) == 0:
        raise GenerationFailure(v_c)

    members = [int(v_c)]
    walks = []
    total = 0.0
    for _ in range(m - 1):
        v_v = VirtualVertex.build(g, theta_G, members)
        walk = None
        for _attempt in range(restarts + 1):
            walk = random_walk(g, theta_G, v_v, max_walk, rng)
            if walk is not None:
                break
        if walk is None:
            raise GenerationFailure(v_c)
        members.append(walk.chosen)
        walks.append(walk)
        total += walk.log_prob
    return MotifSample(vertices=tuple(members), label=False, walks=walks,
                       log_prob=total)


def path_log_prob(g, theta_G, walk):
    """Log-probability of a stored walk's path under ``theta_G``."""
    v_v = VirtualVertex.build(g, theta_G, walk.members)
    log_prob = 0.0
    for current, nxt in walk.transitions():
        cands, probs = relevance_distribution(g, theta_G, v_v, current)
        log_prob += math.log(probs[np.searchsorted(cands, nxt)])
    return log_prob


def sample_log_prob(g, theta_G, sample):
    return sum(path_log_prob(g, theta_G, walk) for walk in sample.walks)


def _accumulate(gradients, row, vector):
    row = int(row)
    if row in gradients:
        gradients[row] = gradients[row] + vector
    else:
        gradients[row] = vector.copy()


def grad_log_G(g, theta_G, sample):
    """Gradient of the log-probability of every walk in ``sample`` (paths
    held fixed) with respect to the generator rows, as a mapping
    row -> vector.
    """
    values = theta_G.values if hasattr(theta_G, 'values') else theta_G
    gradients = {}
    for walk in sample.walks:
        member_rows = values[list(walk.members)]
        v_v = VirtualVertex.build(g, values, walk.members)
        for current, nxt in walk.transitions():
            cands = candidates(g, v_v, current)
            rows = values[cands]
            multiplier = _relevance_multiplier(values, v_v, current)
            s = rows @ multiplier
            live = s > OVERLAP_FLOOR
            weights = -np.expm1(-np.maximum(s, OVERLAP_FLOOR))
            dweights = np.where(live, np.exp(-s), 0.0)

            # d log p(nxt) / d s_j for every candidate j
            coef = -dweights / weights.sum()
            chosen = np.searchsorted(cands, nxt)
            coef[chosen] += dweights[chosen] / weights[chosen]

            for j, c in zip(cands, coef):
                if c != 0.0:
                    _accumulate(gradients, j, c * multiplier)

            shared = coef @ rows
            if current != VIRTUAL:
                _accumulate(gradients, current,
                            shared * v_v.product_vector)
                shared = shared * values[current]
            for r, member in enumerate(walk.members):
                _accumulate(gradients, member,
                            shared * partner_product(member_rows, r))
    return gradients
