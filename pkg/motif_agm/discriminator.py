import math
from dataclasses import dataclass
from typing import Tuple

from motif_agm.agm import (OVERLAP_FLOOR, grad_log_clique_prob,
                           grad_log_one_minus_clique_prob, overlap)
from motif_agm.errors import ParameterError


@dataclass
class DiscriminatorScore:
    subset: Tuple[int, ...]
    score: float
    log_score: float
    log_one_minus: float


def _rows(theta_D, subset):
    subset = tuple(int(v) for v in subset)
    if len(subset) < 2:
        raise ParameterError("a subset needs at least 2 vertices")
    if len(set(subset)) != len(subset):
        raise ParameterError("subset %r repeats a vertex" % (subset,))
    return subset, theta_D[list(subset)]


def score(theta_D, subset):
    """Probability that ``subset`` is a real motif: 1 - exp(-S) over the
    discriminator rows of its vertices.
    """
    subset, rows = _rows(theta_D, subset)
    s = overlap(rows)
    return DiscriminatorScore(
        subset=subset,
        score=-math.expm1(-s),
        log_score=math.log(-math.expm1(-max(s, OVERLAP_FLOOR))),
        log_one_minus=-s)


def batch_objective(theta_D, positives, negatives):
    """Sum of log D over positives plus log(1 - D) over negatives."""
    total = 0.0
    for sample in positives:
        total += score(theta_D, sample.vertices).log_score
    for sample in negatives:
        total += score(theta_D, sample.vertices).log_one_minus
    return total


def _sample_gradients(theta_D, subset, positive):
    subset, rows = _rows(theta_D, subset)
    grad = grad_log_clique_prob if positive else \
        grad_log_one_minus_clique_prob
    gradients = {}
    for i, v in enumerate(subset):
        gradients[v] = gradients.get(v, 0.0) + grad(rows, i)
    return gradients


def update_from_batch(theta_D, positives, negatives, lr, grad_clip=None):
    """One gradient-ascent step per sample, in order: positives raise
    log D, negatives raise log(1 - D).  Rows are projected onto the
    affiliation box after each step.
    """
    if lr <= 0:
        raise ParameterError("learning rate must be positive, got %g" % lr)
    for sample in positives:
        theta_D.apply_row_gradients(
            _sample_gradients(theta_D, sample.vertices, True), lr, grad_clip)
    for sample in negatives:
        theta_D.apply_row_gradients(
            _sample_gradients(theta_D, sample.vertices, False), lr, grad_clip)
    return theta_D
