"""Affiliation Graph Model probabilities over nonnegative vertex-community
affiliation vectors.

For vectors F_1..F_m (rows of an affiliation matrix) the probability
that they form a clique through community c is 1 - exp(-prod_i F_ic),
and through any community 1 - exp(-S) with S = sum_c prod_i F_ic.
"""
import math
from dataclasses import dataclass

import numpy as np

from motif_agm.cover import CommunityAssignment
from motif_agm.errors import CheckpointError, ParameterError

OVERLAP_FLOOR = 1e-10
MAX_AFFILIATION = 1e3


class AffiliationMatrix(object):
    """Dense nonnegative V x C matrix; row v is the affiliation vector
    of vertex v.
    """

    def __init__(self, values):
        self.values = np.array(values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ParameterError("affiliation matrix must be 2-dimensional")

    @classmethod
    def zeros(cls, rows, cols):
        return cls(np.zeros((rows, cols)))

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape

    def __getitem__(self, key):
        return self.values[key]

    def copy(self):
        return AffiliationMatrix(self.values.copy())

    def project(self):
        np.clip(self.values, 0.0, MAX_AFFILIATION, out=self.values)
        return self

    def apply_row_gradients(self, gradients, step, grad_clip=None):
        """Add ``step * gradient`` to every row in ``gradients`` (a mapping
        row -> vector), then project the touched rows onto the box.
        Contributions to the same row are summed, never overwritten.
        """
        for row, gradient in gradients.items():
            if grad_clip:
                gradient = np.clip(gradient, -grad_clip, grad_clip)
            self.values[row] += step * gradient
            np.clip(self.values[row], 0.0, MAX_AFFILIATION,
                    out=self.values[row])

    def is_valid(self):
        return bool(np.all(np.isfinite(self.values)) and
                    np.all(self.values >= 0.0))

    def write_tsv(self, path, vertex_ids=None):
        if vertex_ids is None:
            vertex_ids = range(self.rows)
        with open(path, 'w', encoding='utf-8') as f:
            for vertex, row in zip(vertex_ids, self.values):
                f.write("%d\t%s\n" % (int(vertex),
                                      "\t".join("%.6g" % x for x in row)))

    @classmethod
    def read_tsv(cls, path, g=None):
        """Read a matrix written by write_tsv.  With a graph, rows are
        placed by the graph's compact id of the leading original id, and
        every graph vertex must have a row.
        """
        ids, rows = [], []
        try:
            with open(path, encoding='utf-8') as f:
                for line in f:
                    tokens = line.split()
                    if tokens:
                        ids.append(int(tokens[0]))
                        rows.append([float(t) for t in tokens[1:]])
        except ValueError as e:
            raise CheckpointError(path, e)
        if not rows:
            raise CheckpointError(path, "no rows")
        widths = set(len(row) for row in rows)
        if len(widths) != 1 or 0 in widths:
            raise CheckpointError(path, "every row needs the same, positive "
                                  "number of affiliations")
        values = np.array(rows, dtype=np.float64)
        if g is not None:
            if sorted(ids) != sorted(int(v) for v in g.vertex_ids):
                raise CheckpointError(path, "vertex ids differ from the "
                                      "graph's")
            ordered = np.zeros((g.vertex_count, values.shape[1]))
            for vertex, row in zip(ids, values):
                ordered[g.index_of[vertex]] = row
            values = ordered
        return cls(values).project()


@dataclass
class MembershipThreshold:
    delta: float
    epsilon: float


def entrywise_product(vectors):
    return np.prod(np.asarray(vectors, dtype=np.float64), axis=0)


def overlap(vectors):
    """The sum over communities of the entrywise product of the vectors."""
    return float(np.sum(entrywise_product(vectors)))


def batch_overlap(values, subsets):
    """Overlap of many subsets at once; ``subsets`` is a (k, m) array of
    row indices into ``values``.
    """
    return np.prod(values[np.asarray(subsets)], axis=1).sum(axis=1)


def clique_prob_per_community(vectors, c):
    vectors = np.asarray(vectors, dtype=np.float64)
    return float(-np.expm1(-np.prod(vectors[:, c])))


def clique_prob(vectors):
    return float(-np.expm1(-overlap(vectors)))


def log_clique_prob(vectors):
    return math.log(-math.expm1(-max(overlap(vectors), OVERLAP_FLOOR)))


def log_one_minus_clique_prob(vectors):
    return -overlap(vectors)


def partner_product(vectors, target_index):
    """Entrywise product of every vector except the target one."""
    vectors = np.asarray(vectors, dtype=np.float64)
    return np.prod(np.delete(vectors, target_index, axis=0), axis=0)


def grad_log_clique_prob(vectors, target_index):
    s = max(overlap(vectors), OVERLAP_FLOOR)
    return partner_product(vectors, target_index) / math.expm1(s)


def grad_log_one_minus_clique_prob(vectors, target_index):
    return -partner_product(vectors, target_index)


def edge_log_likelihood(values, positives, negatives):
    """Mean log-likelihood of positive subsets being cliques and
    negative subsets not being cliques under the AGM.
    """
    if isinstance(values, AffiliationMatrix):
        values = values.values
    terms = []
    if len(positives):
        s = np.maximum(batch_overlap(values, positives), OVERLAP_FLOOR)
        terms.append(np.log(-np.expm1(-s)))
    if len(negatives):
        terms.append(-batch_overlap(values, negatives))
    if not terms:
        return 0.0
    return float(np.mean(np.concatenate(terms)))


def community_density(g, members):
    """Share of the member pairs of a community that are edges in g."""
    members = frozenset(int(v) for v in members)
    if len(members) < 2:
        return 0.0
    inside = sum(1 for v in members for u in g.neighbors(v)
                 if int(u) in members) // 2
    return inside / (len(members) * (len(members) - 1) / 2.0)


def cover_edge_probabilities(g, communities, pairs, epsilon):
    """Edge probability of each pair under a hard cover.  Each distinct
    community links its members with its edge density in ``g``, and any
    two vertices link with the background probability ``epsilon``, so a
    repeated community adds nothing.
    """
    distinct = list(dict.fromkeys(frozenset(c) for c in communities
                                  if len(c) > 1))
    densities = [community_density(g, c) for c in distinct]
    probs = np.empty(len(pairs))
    for k, (u, v) in enumerate(pairs):
        u, v = int(u), int(v)
        miss = 1.0 - epsilon
        for members, density in zip(distinct, densities):
            if u in members and v in members:
                miss *= 1.0 - density
        probs[k] = 1.0 - miss
    return probs


def cover_log_likelihood(g, communities, positives, negatives, epsilon):
    """Mean log-likelihood of positive pairs being edges and negative
    pairs not, under the hard-cover edge probabilities.
    """
    terms = []
    if len(positives):
        p = cover_edge_probabilities(g, communities, positives, epsilon)
        terms.append(np.log(np.clip(p, OVERLAP_FLOOR, 1.0)))
    if len(negatives):
        p = cover_edge_probabilities(g, communities, negatives, epsilon)
        terms.append(np.log(np.clip(1.0 - p, OVERLAP_FLOOR, 1.0)))
    if not terms:
        return 0.0
    return float(np.mean(np.concatenate(terms)))


def compute_threshold(g):
    """Membership threshold at which the chance of an edge through a
    single shared community equals the background edge probability.
    """
    if g.vertex_count < 2 or g.edge_count < 1:
        raise ParameterError("threshold needs at least 2 vertices and 1 edge")
    epsilon = 2.0 * g.edge_count / (g.vertex_count * (g.vertex_count - 1))
    if epsilon >= 1.0:
        raise ParameterError("background edge probability is %g; the graph "
                             "is complete and has no community threshold"
                             % epsilon)
    return MembershipThreshold(delta=math.sqrt(-math.log1p(-epsilon)),
                               epsilon=epsilon)


def assign_communities(theta_G, theta_D, t):
    """Vertex v joins community c when g_vc >= delta or d_vc >= delta."""
    if theta_G.shape != theta_D.shape:
        raise ParameterError("generator and discriminator matrices differ "
                             "in shape: %r vs %r" %
                             (theta_G.shape, theta_D.shape))
    members = (theta_G.values >= t.delta) | (theta_D.values >= t.delta)
    sets = [np.flatnonzero(members[:, c]).tolist()
            for c in range(members.shape[1])]
    return CommunityAssignment.from_sets(sets)
