import math

import numpy as np
import pytest

from motif_agm.agm import AffiliationMatrix
from motif_agm.errors import GenerationFailure, ParameterError
from motif_agm.generator import (VIRTUAL, VirtualVertex, candidates,
                                 generate_subset, grad_log_G, path_log_prob,
                                 relevance_distribution, sample_log_prob)
from motif_agm.graph import Graph


def random_theta(g, rng, C=3):
    return AffiliationMatrix(rng.uniform(0.2, 1.0, size=(g.vertex_count, C)))


def test_triangle_generation_is_forced(triangle, rng):
    theta = random_theta(triangle, rng)
    for _ in range(20):
        sample = generate_subset(triangle, theta, 0, 3, rng=rng)
        assert sample.vertices[0] == 0
        assert sorted(sample.vertices) == [0, 1, 2]
        assert not sample.label
        assert len(sample.walks) == 2


def test_subset_has_distinct_vertices(two_k5, rng):
    theta = random_theta(two_k5, rng)
    for v in range(two_k5.vertex_count):
        sample = generate_subset(two_k5, theta, v, 4, rng=rng)
        assert len(set(sample.vertices)) == 4


def test_virtual_vertex(two_triangles, rng):
    theta = random_theta(two_triangles, rng)
    v_v = VirtualVertex.build(two_triangles, theta, [0, 2])
    assert v_v.neighbor_union == frozenset([0, 1, 2, 3])
    assert np.allclose(v_v.product_vector, theta[0] * theta[2])
    assert candidates(two_triangles, v_v, VIRTUAL).tolist() == [1, 3]
    assert candidates(two_triangles, v_v, 3).tolist() == [4, 5]


def test_relevance_is_a_distribution(two_k5, rng):
    theta = random_theta(two_k5, rng)
    v_v = VirtualVertex.build(two_k5, theta, [0])
    for current in (VIRTUAL, 1, 5):
        cands, probs = relevance_distribution(two_k5, theta, v_v, current)
        assert len(cands) == len(probs)
        assert np.all(probs > 0)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_zero_affiliations_give_uniform_moves(two_k5):
    theta = AffiliationMatrix.zeros(two_k5.vertex_count, 2)
    v_v = VirtualVertex.build(two_k5, theta, [0])
    _, probs = relevance_distribution(two_k5, theta, v_v, VIRTUAL)
    assert np.allclose(probs, 1.0 / len(probs))


def test_path_probability_recomputes(two_k5, rng):
    theta = random_theta(two_k5, rng)
    for v in range(two_k5.vertex_count):
        sample = generate_subset(two_k5, theta, v, 3, rng=rng)
        for walk in sample.walks:
            assert path_log_prob(two_k5, theta, walk) == pytest.approx(
                walk.log_prob, abs=1e-10)
        assert sample_log_prob(two_k5, theta, sample) == pytest.approx(
            sample.log_prob, abs=1e-10)


def test_stop_move_is_recorded(two_k5, rng):
    theta = random_theta(two_k5, rng)
    sample = generate_subset(two_k5, theta, 0, 2, rng=rng)
    walk = sample.walks[0]
    assert walk.path[0] == VIRTUAL
    assert walk.chosen == walk.path[-1]
    if not walk.dead_end:
        assert walk.transitions()[-1] == (walk.path[-1], walk.path[-2])


def test_isolated_root_fails(rng):
    g = Graph.from_edges(3, [(0, 1)])
    theta = random_theta(g, rng)
    with pytest.raises(GenerationFailure):
        generate_subset(g, theta, 2, 2, rng=rng)


def test_subset_size_must_be_two(triangle, rng):
    with pytest.raises(ParameterError):
        generate_subset(triangle, random_theta(triangle, rng), 0, 1, rng=rng)


@pytest.mark.parametrize('m', [2, 3, 4])
def test_policy_gradient_matches_finite_differences(two_k5, rng, m):
    theta = random_theta(two_k5, rng)
    sample = generate_subset(two_k5, theta, 2, m, rng=rng)
    gradients = grad_log_G(two_k5, theta, sample)
    values = theta.values
    h = 1e-6
    for row in range(two_k5.vertex_count):
        analytic = gradients.get(row, np.zeros(values.shape[1]))
        for c in range(values.shape[1]):
            up, down = values.copy(), values.copy()
            up[row, c] += h
            down[row, c] -= h
            numeric = (sample_log_prob(two_k5, up, sample) -
                       sample_log_prob(two_k5, down, sample)) / (2 * h)
            assert analytic[c] == pytest.approx(numeric, rel=1e-4, abs=1e-4)


def test_ascending_the_gradient_raises_the_probability(two_k5, rng):
    theta = random_theta(two_k5, rng)
    sample = generate_subset(two_k5, theta, 0, 3, rng=rng)
    before = sample_log_prob(two_k5, theta, sample)
    theta.apply_row_gradients(grad_log_G(two_k5, theta, sample), 1e-3)
    assert sample_log_prob(two_k5, theta, sample) >= before


def scalar_relevance(g, theta, members, current):
    """Straight-line evaluation of the move probabilities, one candidate
    and one community at a time.
    """
    product = [1.0] * theta.cols
    for v in members:
        for c in range(theta.cols):
            product[c] *= theta[v, c]
    if current == VIRTUAL:
        pool = set()
        for v in members:
            pool.update(int(u) for u in g.neighbors(v))
    else:
        pool = set(int(u) for u in g.neighbors(current))
    pool = sorted(pool - set(members))
    weights = []
    for u in pool:
        s = 0.0
        for c in range(theta.cols):
            factor = theta[u, c] * product[c]
            if current != VIRTUAL:
                factor *= theta[current, c]
            s += factor
        weights.append(1.0 - math.exp(-s))
    total = sum(weights)
    return pool, [w / total for w in weights]


def test_relevance_matches_scalar_evaluation(two_k5, rng):
    for _ in range(50):
        theta = random_theta(two_k5, rng, C=int(rng.integers(1, 5)))
        members = rng.choice(10, size=int(rng.integers(1, 4)),
                             replace=False).tolist()
        v_v = VirtualVertex.build(two_k5, theta, members)
        for current in [VIRTUAL] + sorted(v_v.neighbor_union -
                                          set(members)):
            cands, probs = relevance_distribution(two_k5, theta, v_v,
                                                  current)
            pool, expected = scalar_relevance(two_k5, theta, members,
                                              current)
            assert cands.tolist() == pool
            assert probs.tolist() == pytest.approx(expected, rel=1e-9)


def test_relevance_is_normalised_over_many_calls(two_k5, rng):
    theta = random_theta(two_k5, rng)
    calls = 0
    while calls < 10 ** 4:
        if calls % 100 == 0:
            theta = AffiliationMatrix(
                rng.uniform(0.0, 2.0, size=(10, int(rng.integers(1, 6)))))
        members = rng.choice(10, size=int(rng.integers(1, 4)),
                             replace=False).tolist()
        v_v = VirtualVertex.build(two_k5, theta, members)
        current = VIRTUAL if calls % 2 else int(rng.integers(10))
        cands, probs = relevance_distribution(two_k5, theta, v_v, current)
        calls += 1
        if not len(cands):
            continue
        assert abs(probs.sum() - 1.0) <= 1e-9
        assert np.all(probs >= 0.0)


def test_star_center_picks_two_leaves(rng):
    star = Graph.from_edges(5, [(0, leaf) for leaf in range(1, 5)])
    theta = random_theta(star, rng)
    for _ in range(20):
        sample = generate_subset(star, theta, 0, 3, rng=rng)
        center, first, second = sample.vertices
        assert center == 0
        assert first != second
        assert {first, second} <= {1, 2, 3, 4}
        assert not star.is_clique(sample.vertices)


@pytest.mark.parametrize('seed', range(20))
def test_policy_gradient_on_random_instances(seed):
    rng = np.random.default_rng(seed)
    g = Graph.from_edges(10, [(u, v) for u in range(10)
                              for v in range(u + 1, 10)
                              if rng.random() < 0.6])
    theta = AffiliationMatrix(rng.uniform(0.05, 2.0, size=(10, 3)))
    roots = [v for v in range(10) if g.degree(v) > 0]
    m = int(rng.integers(2, 5))
    try:
        sample = generate_subset(g, theta, roots[0], m, rng=rng)
    except GenerationFailure:
        pytest.skip("no subset of size %d around vertex %d" % (m, roots[0]))
    gradients = grad_log_G(g, theta, sample)
    h = 1e-6
    for row in range(10):
        analytic = gradients.get(row, np.zeros(3))
        for c in range(3):
            up, down = theta.values.copy(), theta.values.copy()
            up[row, c] += h
            down[row, c] -= h
            numeric = (sample_log_prob(g, up, sample) -
                       sample_log_prob(g, down, sample)) / (2 * h)
            assert analytic[c] == pytest.approx(numeric, rel=1e-4, abs=1e-4)
