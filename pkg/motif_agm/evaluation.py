"""Evaluation of detected covers and learned affiliations.

Best-match F1 and overlapping NMI compare two covers; clique prediction
measures how well affiliations rank hidden cliques above non-cliques;
motif statistics measure how much likelier cliques are inside
communities than across the whole graph.
"""
import csv
import math
import os
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from sklearn.linear_model import LogisticRegression
from sklearn.metrics import roc_auc_score

from motif_agm.agm import AffiliationMatrix, batch_overlap
from motif_agm.cover import CommunityAssignment
from motif_agm.errors import DegenerateSplitError, ParameterError
from motif_agm.graph import Graph, check_clique_size, enumerate_cliques
from motif_agm.pretrain import sample_non_cliques

MIN_STATS_TRIALS = 10 ** 4
MAX_TRAIN_CLIQUES = 5000


def _cover(communities, source):
    if isinstance(communities, CommunityAssignment):
        return communities
    return CommunityAssignment.from_sets(communities, source)


def pairwise_f1(truth, detected):
    common = len(truth & detected)
    if common == 0:
        return 0.0
    precision = common / float(len(detected))
    recall = common / float(len(truth))
    return 2 * precision * recall / (precision + recall)


def f1_score(truth, detected):
    """Average of the best-match F1 from each side: every ground-truth
    community against its best detected match and vice versa.
    """
    truth = _cover(truth, 'ground-truth')
    detected = _cover(detected, 'detected')
    if not len(truth) or not len(detected):
        raise ParameterError("F1 needs at least one community on each side")
    scores = np.array([[pairwise_f1(t, d) for d in detected.communities]
                       for t in truth.communities])
    return 0.5 * (scores.max(axis=1).mean() + scores.max(axis=0).mean())


def _h(count, n):
    if count <= 0:
        return 0.0
    p = count / float(n)
    return -p * math.log2(p)


def _entropy(size, n):
    return _h(size, n) + _h(n - size, n)


def _conditional_entropy(x, y, n):
    """H(X_k | Y_l) for two communities seen as binary vertex labels, or
    None when the pair fails the information constraint that the
    agreeing cells carry more entropy than the disagreeing ones.
    """
    n11 = len(x & y)
    n10 = len(x) - n11
    n01 = len(y) - n11
    n00 = n - n11 - n10 - n01
    if _h(n11, n) + _h(n00, n) <= _h(n01, n) + _h(n10, n):
        return None
    joint = _h(n11, n) + _h(n10, n) + _h(n01, n) + _h(n00, n)
    return joint - _entropy(len(y), n)


def _cover_conditional_entropy(xs, ys, n):
    total = 0.0
    for x in xs:
        best = _entropy(len(x), n)
        for y in ys:
            h = _conditional_entropy(x, y, n)
            if h is not None and h < best:
                best = h
        total += best
    return total


def overlapping_nmi(truth, detected, vertex_count=None):
    """Normalized mutual information between two overlapping covers,
    in the max-normalised form of McDaid, Greene and Hurley (2011):

        I(X:Y) = (H(X) - H(X|Y) + H(Y) - H(Y|X)) / 2
        NMI    = I(X:Y) / max(H(X), H(Y))

    where H(X) sums the binary entropies of the communities in X and
    H(X|Y) sums, per community of X, the smallest admissible conditional
    entropy given a community of Y.  The vertex universe defaults to the
    union of both covers.  When neither cover carries any entropy (every
    community spans the whole universe) the result is 1.0 for identical
    covers and 0.0 otherwise.
    """
    truth = _cover(truth, 'ground-truth')
    detected = _cover(detected, 'detected')
    if not len(truth) or not len(detected):
        raise ParameterError("NMI needs at least one community on each side")
    n = vertex_count or len(truth.vertices() | detected.vertices())
    xs, ys = truth.communities, detected.communities
    hx = sum(_entropy(len(x), n) for x in xs)
    hy = sum(_entropy(len(y), n) for y in ys)
    if max(hx, hy) == 0.0:
        return 1.0 if set(xs) == set(ys) else 0.0
    hx_given_y = _cover_conditional_entropy(xs, ys, n)
    hy_given_x = _cover_conditional_entropy(ys, xs, n)
    mutual = 0.5 * (hx - hx_given_y + hy - hy_given_x)
    return min(1.0, max(0.0, mutual / max(hx, hy)))


def rank_auc(positive_scores, negative_scores):
    """Probability that a random positive outranks a random negative,
    ties counting one half.
    """
    if not len(positive_scores) or not len(negative_scores):
        raise ParameterError("AUC needs both positive and negative samples")
    labels = np.r_[np.ones(len(positive_scores)),
                   np.zeros(len(negative_scores))]
    return float(roc_auc_score(labels, np.r_[positive_scores,
                                             negative_scores]))


@dataclass
class CliquePredictionSplit:
    train_graph: Graph
    positives: np.ndarray
    negatives: np.ndarray
    removed_edges: int
    achieved_fraction: float


def build_clique_split(g, m, target_edge_fraction, rng):
    """Hide edge-disjoint m-cliques until at least the target fraction of
    edges is gone, and draw as many non-cliques as negatives.  When the
    graph runs out of cliques the split is returned as far as it got.
    """
    check_clique_size(m)
    if not 0.0 < target_edge_fraction < 0.5:
        raise ParameterError("edge fraction must lie in (0, 0.5)")
    idx = enumerate_cliques(g, m)
    target = target_edge_fraction * g.edge_count
    remaining = set(g.edges())
    hidden = []
    for i in rng.permutation(len(idx)):
        if len(hidden) and g.edge_count - len(remaining) >= target:
            break
        clique = idx.cliques[i]
        pairs = [(u, v) for a, u in enumerate(clique) for v in clique[a + 1:]]
        if all(p in remaining for p in pairs):
            remaining.difference_update(pairs)
            hidden.append(clique)

    removed = g.edge_count - len(remaining)
    train_graph = Graph.from_edges(g.vertex_count, sorted(remaining),
                                   g.vertex_ids)
    positives = np.array(hidden, dtype=np.int64).reshape(-1, m)
    negatives = sample_non_cliques(g, m, len(positives), rng)
    return CliquePredictionSplit(train_graph, positives, negatives, removed,
                                 removed / float(g.edge_count))


def clique_features(values, subsets):
    """Per-community entrywise products of the subsets' rows."""
    if isinstance(values, AffiliationMatrix):
        values = values.values
    return np.prod(values[np.asarray(subsets)], axis=1)


def clique_prediction_auc(g, split, theta, m, rng=None, method='logistic'):
    """AUC of hidden cliques against non-cliques.  With ``method`` set to
    'logistic' a logistic regression over clique_features is fitted on
    the training graph's cliques versus sampled non-cliques; with 'agm'
    the clique probability itself is the score.
    """
    if rng is None:
        rng = np.random.default_rng()
    values = theta.values if isinstance(theta, AffiliationMatrix) else theta
    if not len(split.positives) or not len(split.negatives):
        raise DegenerateSplitError("clique split has an empty test class")

    if method == 'agm':
        return rank_auc(-np.expm1(-batch_overlap(values, split.positives)),
                        -np.expm1(-batch_overlap(values, split.negatives)))
    if method != 'logistic':
        raise ParameterError("unknown scoring method %r" % method)

    train_idx = enumerate_cliques(split.train_graph, m)
    train_pos = np.array(train_idx.cliques, dtype=np.int64).reshape(-1, m)
    if len(train_pos) > MAX_TRAIN_CLIQUES:
        train_pos = train_pos[rng.choice(len(train_pos), MAX_TRAIN_CLIQUES,
                                         replace=False)]
    train_neg = sample_non_cliques(split.train_graph, m, len(train_pos), rng)
    if not len(train_pos) or not len(train_neg):
        raise DegenerateSplitError("training graph lacks %d-cliques or "
                                   "non-cliques" % m)
    features = np.vstack([clique_features(values, train_pos),
                          clique_features(values, train_neg)])
    labels = np.r_[np.ones(len(train_pos)), np.zeros(len(train_neg))]
    model = LogisticRegression(max_iter=1000)
    model.fit(features, labels)
    return rank_auc(
        model.predict_proba(clique_features(values, split.positives))[:, 1],
        model.predict_proba(clique_features(values, split.negatives))[:, 1])


@dataclass
class MotifStats:
    size: int
    within_community: Optional[float]
    global_: float
    skipped_communities: int
    shared_curve: Dict[int, float] = field(default_factory=dict)
    shared_counts: Dict[int, int] = field(default_factory=dict)


def _shared_communities(member_of, vertices):
    shared = None
    for v in vertices:
        mine = set(member_of.get(int(v), ()))
        shared = mine if shared is None else shared & mine
    return len(shared) if shared else 0


def motif_community_stats(g, truth, sizes, trials, rng):
    """For each clique size k: the chance that k vertices drawn from one
    random community form a clique, the same for k vertices drawn from
    the whole graph, and the clique chance by number of communities the
    k vertices share, scaled so its maximum is one.
    """
    if trials < MIN_STATS_TRIALS:
        raise ParameterError("need at least %d trials" % MIN_STATS_TRIALS)
    truth = _cover(truth, 'ground-truth')
    member_of = truth.memberships()
    results = []
    for k in sizes:
        check_clique_size(k)
        eligible = [sorted(c) for c in truth.communities if len(c) >= k]
        bins = {}

        def record(vertices):
            hit = g.is_clique(vertices)
            shared = _shared_communities(member_of, vertices)
            counts = bins.setdefault(shared, [0, 0])
            counts[0] += hit
            counts[1] += 1
            return hit

        within = None
        if eligible:
            hits = 0
            for _ in range(trials):
                community = eligible[rng.integers(len(eligible))]
                hits += record(rng.choice(community, size=k, replace=False))
            within = hits / float(trials)

        hits = 0
        for _ in range(trials):
            hits += record(rng.choice(g.vertex_count, size=k, replace=False))

        rates = {s: c[0] / float(c[1]) for s, c in sorted(bins.items())}
        peak = max(rates.values()) if rates else 0.0
        results.append(MotifStats(
            size=k,
            within_community=within,
            global_=hits / float(trials),
            skipped_communities=len(truth) - len(eligible),
            shared_curve={s: (r / peak if peak else 0.0)
                          for s, r in rates.items()},
            shared_counts={s: c[1] for s, c in sorted(bins.items())}))
    return results


def motif_size_table(g, sizes):
    """Number of m-cliques and of vertices they cover, per size."""
    rows = []
    for m in sizes:
        idx = enumerate_cliques(g, m)
        rows.append({'m': m, 'cliques': len(idx), 'covered': idx.coverage})
    return rows


def format_report(metrics):
    return "".join("%s=%s\n" % (key, value)
                   for key, value in metrics.items())


def append_csv_row(path, metrics):
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    with open(path, 'a', newline='', encoding='utf-8') as f:
        writer = csv.DictWriter(f, fieldnames=list(metrics))
        if not exists:
            writer.writeheader()
        writer.writerow(metrics)
