import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np

from motif_agm.agm import (AffiliationMatrix, assign_communities,
                           compute_threshold, cover_log_likelihood,
                           edge_log_likelihood)
from motif_agm.config import AUTO
from motif_agm.discriminator import batch_objective, score, update_from_batch
from motif_agm.errors import (DegenerateSplitError, GenerationFailure,
                              NoCliquesError, ParameterError)
from motif_agm.generator import generate_subset, grad_log_G
from motif_agm.graph import Graph, enumerate_cliques, sample_true_motif
from motif_agm.listener.base import TrainingListener
from motif_agm.pretrain import (AGMPretrainer, init_locally_minimal,
                                sample_non_cliques)
from motif_agm.utils import standard_logger

# Sub-streams of the run seed
G_PHASE, D_PHASE, POSITIVE_PHASE, INIT_PHASE, VALIDATION_PHASE, \
    SELECT_PHASE = range(6)

HOLDOUT_FRACTION = 0.2
SPLIT_RETRIES = 5


@dataclass
class TrainState:
    theta_G: AffiliationMatrix
    theta_D: AffiliationMatrix
    iteration: int = 0
    history: List[float] = field(default_factory=list)
    g_rewards: List[float] = field(default_factory=list)
    d_objectives: List[float] = field(default_factory=list)
    pretrain_history: List[float] = field(default_factory=list)
    converged: bool = False
    wall_clock: float = 0.0


class CommunityTrainer(object):
    """Class for training a motif generator and discriminator against
    each other over nonnegative vertex-community affiliations.

    After initialisation (optionally an AGM pretrain), each outer
    iteration runs a G-step, where generated subsets are rewarded by
    log(1 - D(s)) and the generator descends on that reward by policy
    gradient, then a D-step, where the discriminator ascends on
    observed cliques versus generated subsets.
    """

    def __init__(self, g, idx, cfg, logger=None):
        self.g = g
        self.idx = idx
        self.cfg = cfg

        if logger is None:
            self.logger = standard_logger(self.__class__.__name__,
                                          cfg.debug)
        else:
            self.logger = logger

        if idx.clique_size != cfg.clique_size:
            raise ParameterError("clique index holds %d-cliques but the "
                                 "config asks for %d" %
                                 (idx.clique_size, cfg.clique_size))
        if len(idx) == 0:
            raise NoCliquesError(cfg.clique_size)
        if cfg.communities == AUTO:
            raise ParameterError("resolve the community count before "
                                 "building a trainer")

        # Generation roots; isolated vertices cannot start a walk
        self.roots = [v for v in range(g.vertex_count) if g.degree(v) > 0]

        # Callbacks to be invoked as training progresses
        self.listeners = []

        self.validation_positives = None
        self.validation_negatives = None

    def add_listener(self, listener):
        if not isinstance(listener, TrainingListener):
            raise RuntimeError("Listener must be a TrainingListener")
        self.listeners.append(listener)
        listener.set_trainer(self)

    def notify_listeners(self, event, *args):
        for listener in self.listeners:
            fn = getattr(listener, event)
            fn(*args)

    def rng(self, *key):
        """A generator seeded from the run seed and ``key``, so a draw
        depends only on where it happens, never on thread scheduling.
        """
        return np.random.default_rng(
            np.random.SeedSequence([self.cfg.seed] + [int(k) for k in key]))

    def initialize(self):
        cfg = self.cfg
        init = init_locally_minimal(self.g, cfg.communities,
                                    self.rng(INIT_PHASE, 0))
        if cfg.init == 'locally-minimal':
            return init, []
        pretrainer = AGMPretrainer(self.g, self.idx, lr=cfg.pretrain_lr,
                                   batch_size=cfg.pretrain_batch_size,
                                   grad_clip=cfg.pretrain_grad_clip,
                                   rng=self.rng(INIT_PHASE, 1),
                                   debug=cfg.debug,
                                   notify=self.notify_listeners)
        return pretrainer.fit(init, cfg.pretrain_epochs), pretrainer.history

    def resume_from(self, theta_G, theta_D):
        expected = (self.g.vertex_count, self.cfg.communities)
        for theta in (theta_G, theta_D):
            if theta.shape != expected:
                raise ParameterError("cannot resume a %d x %d model from a "
                                     "%d x %d matrix" %
                                     (expected + theta.shape))
        return theta_G.copy(), theta_D.copy()

    def prepare_validation(self):
        rng = self.rng(VALIDATION_PHASE)
        edges = np.array(self.g.edges(), dtype=np.int64)
        count = min(len(edges), self.cfg.validation_pairs)
        self.validation_positives = edges[rng.choice(len(edges), count,
                                                     replace=False)]
        self.validation_negatives = sample_non_cliques(self.g, 2, count, rng)

    def validation_objective(self, theta_G):
        return edge_log_likelihood(theta_G, self.validation_positives,
                                   self.validation_negatives)

    def generate_for_vertex(self, theta_G, v, count, iteration, phase,
                            inner=0):
        rng = self.rng(phase, iteration, inner, v)
        samples = []
        for _ in range(count):
            try:
                samples.append(generate_subset(
                    self.g, theta_G, v, self.cfg.clique_size,
                    self.cfg.max_walk, rng, self.cfg.walk_restarts))
            except GenerationFailure as e:
                self.logger.debug("      %s" % e.message())
        return samples

    def generate_all(self, theta_G, count, iteration, phase, inner=0):
        """Generated samples for every root, in root order.  Generation
        only reads the graph and ``theta_G``, so it fans out over the
        configured number of threads.
        """
        def work(v):
            return self.generate_for_vertex(theta_G, v, count, iteration,
                                            phase, inner)

        if self.cfg.threads <= 1:
            return [work(v) for v in self.roots]
        with ThreadPoolExecutor(max_workers=self.cfg.threads) as pool:
            return list(pool.map(work, self.roots))

    def reward(self, theta_D, sample):
        reward = score(theta_D, sample.vertices).log_one_minus
        if self.cfg.reward_floor:
            reward = max(reward, self.cfg.reward_floor)
        return reward

    def policy_gradient_update(self, theta_G, theta_D, sample):
        """Descend on grad log G(s) * log(1 - D(s)) for one sample."""
        reward = self.reward(theta_D, sample)
        if reward == 0.0:
            return reward
        gradients = grad_log_G(self.g, theta_G, sample)
        theta_G.apply_row_gradients(gradients, -self.cfg.lr * reward,
                                    self.cfg.grad_clip)
        return reward

    def g_step(self, state):
        """Each inner update draws a fresh batch from the current
        generator before descending on it.
        """
        rewards = []
        for inner in range(self.cfg.inner_updates):
            batches = self.generate_all(state.theta_G.copy(),
                                        self.cfg.generating_samples,
                                        state.iteration, G_PHASE, inner)
            for samples in batches:
                for sample in samples:
                    rewards.append(self.policy_gradient_update(
                        state.theta_G, state.theta_D, sample))
        return float(np.mean(rewards)) if rewards else 0.0

    def positives_for_vertex(self, v, iteration, inner=0):
        rng = self.rng(POSITIVE_PHASE, iteration, inner, v)
        positives = []
        for _ in range(self.cfg.discriminating_samples):
            sample = sample_true_motif(self.idx, v, rng)
            # Vertices no clique covers contribute no positives
            if sample is None:
                break
            positives.append(sample)
        return positives

    def d_step(self, state):
        """Mean per-sample objective of the batches, each scored right
        after the update it drove.
        """
        objective, count = 0.0, 0
        for inner in range(self.cfg.inner_updates):
            negatives = self.generate_all(state.theta_G.copy(),
                                          self.cfg.discriminating_samples,
                                          state.iteration, D_PHASE, inner)
            positives = [self.positives_for_vertex(v, state.iteration, inner)
                         for v in self.roots]
            for pos, neg in zip(positives, negatives):
                update_from_batch(state.theta_D, pos, neg, self.cfg.lr,
                                  self.cfg.grad_clip)
            for pos, neg in zip(positives, negatives):
                objective += batch_objective(state.theta_D, pos, neg)
                count += len(pos) + len(neg)
        return objective / count if count else 0.0

    def has_converged(self, history):
        window = self.cfg.convergence_window
        if len(history) <= window:
            return False
        before, now = history[-window - 1], history[-1]
        change = abs(now - before) / max(abs(before), 1e-12)
        return change < self.cfg.convergence_tolerance

    def train(self, initial=None):
        """Run the adversarial loop.  ``initial`` is an optional
        (theta_G, theta_D) pair to start from in place of initialisation.
        """
        started = time.time()
        self.prepare_validation()

        if initial is None:
            (theta_G, theta_D), pretrain_history = self.initialize()
        else:
            theta_G, theta_D = self.resume_from(*initial)
            pretrain_history = []
        state = TrainState(theta_G=theta_G, theta_D=theta_D,
                           pretrain_history=list(pretrain_history))
        self.notify_listeners('training_started', state)
        state.history.append(self.validation_objective(state.theta_G))
        self.notify_listeners('pretrain_done', state)
        self.logger.info("Initialised %d communities, validation %.6f" %
                         (theta_G.cols, state.history[-1]))

        while state.iteration < self.cfg.max_iterations:
            state.iteration += 1
            self.logger.info("Iteration %d" % state.iteration)
            g_reward = self.g_step(state)
            d_objective = self.d_step(state)
            validation = self.validation_objective(state.theta_G)
            state.g_rewards.append(g_reward)
            state.d_objectives.append(d_objective)
            state.history.append(validation)
            self.logger.info("  reward %.6f, D objective %.6f, "
                             "validation %.6f" %
                             (g_reward, d_objective, validation))
            self.notify_listeners('iteration_done', state, g_reward,
                                  d_objective, validation)
            if self.has_converged(state.history):
                state.converged = True
                self.logger.info("Converged after %d iterations" %
                                 state.iteration)
                self.notify_listeners('converged', state)
                break

        state.wall_clock = time.time() - started
        self.notify_listeners('all_done', state)
        return state


def holdout_split(g, clique_size, rng, fraction=HOLDOUT_FRACTION):
    """Hold out a uniform ``fraction`` of edges; returns the training
    graph, its clique index and the held-out edges.
    """
    edges = np.array(g.edges(), dtype=np.int64)
    for _ in range(SPLIT_RETRIES):
        order = rng.permutation(len(edges))
        cut = int(round(fraction * len(edges)))
        held, kept = edges[order[:cut]], edges[order[cut:]]
        train_graph = Graph.from_edges(g.vertex_count, kept, g.vertex_ids)
        train_idx = enumerate_cliques(train_graph, clique_size)
        if len(train_idx):
            return train_graph, train_idx, held
    raise DegenerateSplitError("every holdout split removed all %d-cliques"
                               % clique_size)


def score_community_counts(g, idx, candidates, cfg, logger=None):
    """Validation log-likelihood of held-out edges (against as many
    non-edges) for a model trained with each candidate count.

    Each model is scored through the cover it would report: its
    thresholded communities, with duplicates merged, and each one's
    edge density on the training graph.  Two counts that yield the same
    cover therefore score exactly alike and the smaller one is kept.
    """
    if logger is None:
        logger = standard_logger('CommunityCount', cfg.debug)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed,
                                                        SELECT_PHASE]))
    train_graph, train_idx, held = holdout_split(g, cfg.clique_size, rng)
    negatives = sample_non_cliques(g, 2, len(held), rng)
    threshold = compute_threshold(train_graph)
    scores = {}
    for C in sorted(set(candidates)):
        state = CommunityTrainer(train_graph, train_idx,
                                 cfg.with_communities(C)).train()
        cover = assign_communities(state.theta_G, state.theta_D, threshold)
        scores[C] = cover_log_likelihood(train_graph, cover.communities,
                                         held, negatives, threshold.epsilon)
        logger.info("Candidate C=%d scores %.6f" % (C, scores[C]))
    return scores


def best_community_count(scores):
    """Highest score wins; ties go to the smaller count."""
    if not scores:
        raise ParameterError("no candidate community counts")
    return min(scores, key=lambda C: (-scores[C], C))


def select_community_count(g, idx, candidates, cfg, logger=None):
    candidates = sorted(set(candidates))
    if len(candidates) == 1:
        return candidates[0]
    return best_community_count(
        score_community_counts(g, idx, candidates, cfg, logger))


def train(g, idx, cfg, listeners=(), initial=None):
    """Run a full training; an 'auto' community count is chosen first
    from ``cfg.community_candidates``, unless ``initial`` affiliations
    fix it.
    """
    cfg.validate()
    if initial is not None and cfg.communities == AUTO:
        cfg = cfg.with_communities(initial[0].cols)
    if cfg.communities == AUTO:
        cfg = cfg.with_communities(select_community_count(
            g, idx, cfg.community_candidates, cfg))
    trainer = CommunityTrainer(g, idx, cfg)
    for listener in listeners:
        trainer.add_listener(listener)
    return trainer.train(initial)
