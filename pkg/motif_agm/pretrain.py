"""Model initialisation: seeding communities from locally minimal
neighborhoods, and fitting a plain clique-level AGM by projected SGD.
"""
import numpy as np

from motif_agm.agm import (OVERLAP_FLOOR, AffiliationMatrix,
                           edge_log_likelihood)
from motif_agm.utils import standard_logger

INIT_JITTER = 0.1
NEGATIVE_ROUNDS = 100


def conductance(g, members):
    """Cut edges leaving ``members`` over the smaller of the set's volume
    and its complement's.  A set with an empty side has conductance 1.
    """
    members = set(int(v) for v in members)
    volume = sum(g.degree(v) for v in members)
    cut = sum(1 for v in members for u in g.neighbors(v)
              if int(u) not in members)
    denominator = min(volume, 2 * g.edge_count - volume)
    if denominator == 0:
        return 1.0
    return cut / denominator


def closed_neighborhood(g, v):
    return frozenset([int(v)] + g.neighbors(v).tolist())


def neighborhood_conductances(g):
    return np.array([conductance(g, closed_neighborhood(g, v))
                     for v in range(g.vertex_count)])


def locally_minimal_vertices(g, phi=None):
    """Vertices whose closed neighborhood has lower conductance than
    every neighbor's, comparing (conductance, vertex id) so ties go to
    the smaller id.
    """
    if phi is None:
        phi = neighborhood_conductances(g)
    minimal = []
    for v in range(g.vertex_count):
        if g.degree(v) == 0:
            continue
        if all((phi[v], v) < (phi[u], int(u)) for u in g.neighbors(v)):
            minimal.append(v)
    return minimal


def seed_vertices(g, count):
    """The ``count`` seed vertices: locally minimal ones by ascending
    conductance, topped up with the next-lowest-conductance vertices.
    """
    phi = neighborhood_conductances(g)
    ranked = sorted((v for v in range(g.vertex_count) if g.degree(v) > 0),
                    key=lambda v: (phi[v], v))
    minimal = set(locally_minimal_vertices(g, phi))
    seeds = [v for v in ranked if v in minimal][:count]
    for v in ranked:
        if len(seeds) >= count:
            break
        if v not in seeds:
            seeds.append(v)
    return seeds


def init_locally_minimal(g, C_target, rng=None, jitter=INIT_JITTER):
    if rng is None:
        rng = np.random.default_rng()
    base = np.zeros((g.vertex_count, C_target))
    for c, v in enumerate(seed_vertices(g, C_target)):
        base[list(closed_neighborhood(g, v)), c] = 1.0
    theta_G = AffiliationMatrix(base + rng.uniform(0, jitter, base.shape))
    theta_D = AffiliationMatrix(base + rng.uniform(0, jitter, base.shape))
    return theta_G, theta_D


def sample_non_cliques(g, m, count, rng):
    """``count`` uniformly random m-subsets that are not cliques.  Fewer
    are returned if rejection keeps failing (e.g. on a complete graph).
    """
    found = []
    for _ in range(NEGATIVE_ROUNDS):
        if len(found) >= count:
            break
        draws = rng.integers(g.vertex_count, size=(2 * count, m))
        for subset in draws:
            if len(set(subset.tolist())) == m and not g.is_clique(subset):
                found.append(subset)
                if len(found) >= count:
                    break
    return np.array(found, dtype=np.int64).reshape(-1, m)


class AGMPretrainer(object):
    """Fits one affiliation matrix F by projected SGD on the clique
    log-likelihood: every m-clique is a positive, each paired with one
    uniformly drawn non-clique m-subset as a negative.
    """

    def __init__(self, g, idx, lr=0.005, batch_size=256, grad_clip=10.0,
                 rng=None, debug=False, notify=None):
        self.g = g
        self.idx = idx
        self.lr = lr
        self.batch_size = batch_size
        self.grad_clip = grad_clip
        self.rng = np.random.default_rng() if rng is None else rng
        self.logger = standard_logger(self.__class__.__name__, debug)
        self.notify = notify
        self.history = []

    def gradient(self, values, positives, negatives):
        grad = np.zeros_like(values)
        m = positives.shape[1] if len(positives) else negatives.shape[1]
        for subsets, positive in ((positives, True), (negatives, False)):
            if not len(subsets):
                continue
            rows = values[subsets]
            if positive:
                s = np.maximum(np.prod(rows, axis=1).sum(axis=1),
                               OVERLAP_FLOOR)
                weight = (1.0 / np.expm1(s))[:, None]
            else:
                weight = -1.0
            for i in range(m):
                partner = np.prod(np.delete(rows, i, axis=1), axis=1)
                np.add.at(grad, subsets[:, i], weight * partner)
        if self.grad_clip:
            np.clip(grad, -self.grad_clip, self.grad_clip, out=grad)
        return grad

    def fit(self, init, epochs):
        """Returns independent generator and discriminator copies of the
        fitted matrix; with zero epochs, ``init`` is returned untouched.
        """
        if epochs <= 0:
            return init
        F = init[0].copy()
        cliques = np.array(self.idx.cliques, dtype=np.int64)
        m = self.idx.clique_size
        held = sample_non_cliques(self.g, m, len(cliques), self.rng)
        self.history.append(edge_log_likelihood(F, cliques, held))
        self.logger.info("Pretraining on %d %d-cliques, initial "
                         "objective %.6f" % (len(cliques), m,
                                             self.history[0]))

        for epoch in range(epochs):
            order = self.rng.permutation(len(cliques))
            negatives = sample_non_cliques(self.g, m, len(cliques), self.rng)
            for start in range(0, len(order), self.batch_size):
                batch = cliques[order[start:start + self.batch_size]]
                neg = negatives[start:start + self.batch_size]
                F.values += self.lr * self.gradient(F.values, batch, neg)
                F.project()
            objective = edge_log_likelihood(F, cliques, held)
            self.history.append(objective)
            self.logger.info("  Pretrain epoch %d objective %.6f" %
                             (epoch + 1, objective))
            if self.notify is not None:
                self.notify('pretrain_epoch', epoch + 1, objective)
        return F.copy(), F.copy()


def pretrain_agm(g, idx, C, epochs, rng=None, **kwargs):
    if rng is None:
        rng = np.random.default_rng()
    init = init_locally_minimal(g, C, rng)
    return AGMPretrainer(g, idx, rng=rng, **kwargs).fit(init, epochs)
