import numpy as np
import pytest

from conftest import complete_edges
from motif_agm.agm import AffiliationMatrix, assign_communities, \
    compute_threshold
from motif_agm.config import TrainConfig
from motif_agm.errors import NoCliquesError, ParameterError
from motif_agm.evaluation import f1_score
from motif_agm.generator import generate_subset, sample_log_prob
from motif_agm.graph import Graph, enumerate_cliques
from motif_agm.listener.json import JSONTrainingListener
from motif_agm.pretrain import AGMPretrainer, init_locally_minimal
from motif_agm.trainer import (D_PHASE, G_PHASE, INIT_PHASE, CommunityTrainer,
                               best_community_count, holdout_split,
                               score_community_counts,
                               select_community_count, train)

TWO_K5 = [frozenset(range(5)), frozenset(range(5, 10))]


def trained_cover(g, state):
    return assign_communities(state.theta_G, state.theta_D,
                              compute_threshold(g))


@pytest.mark.parametrize('seed', range(10))
def test_recovers_two_k5(two_k5, quick_config, seed):
    quick_config.seed = seed
    state = train(two_k5, enumerate_cliques(two_k5, 3), quick_config)
    assert state.iteration == 3
    assert f1_score(TWO_K5, trained_cover(two_k5, state)) == 1.0


def test_recovers_two_k5_after_pretraining(two_k5, quick_config):
    cfg = quick_config.with_communities(2)
    cfg.init = 'agm-pretrain'
    state = train(two_k5, enumerate_cliques(two_k5, 3), cfg)
    assert len(state.pretrain_history) == cfg.pretrain_epochs + 1
    assert f1_score(TWO_K5, trained_cover(two_k5, state)) == 1.0


def test_zero_iterations_returns_pretrained_model(two_k5):
    cfg = TrainConfig(communities=2, max_iterations=0, pretrain_epochs=5,
                      seed=4)
    idx = enumerate_cliques(two_k5, 3)
    state = train(two_k5, idx, cfg)

    def seeded(phase, n):
        return np.random.default_rng(np.random.SeedSequence([4, phase, n]))

    init = init_locally_minimal(two_k5, 2, seeded(INIT_PHASE, 0))
    theta_G, theta_D = AGMPretrainer(
        two_k5, idx, lr=cfg.pretrain_lr, batch_size=cfg.pretrain_batch_size,
        grad_clip=cfg.pretrain_grad_clip,
        rng=seeded(INIT_PHASE, 1)).fit(init, 5)
    assert state.iteration == 0
    assert len(state.history) == 1
    assert np.array_equal(state.theta_G.values, theta_G.values)
    assert np.array_equal(state.theta_D.values, theta_D.values)


def test_same_seed_same_result(two_k5, quick_config):
    idx = enumerate_cliques(two_k5, 3)
    first = train(two_k5, idx, quick_config)
    second = train(two_k5, idx, quick_config)
    assert np.array_equal(first.theta_G.values, second.theta_G.values)
    assert np.array_equal(first.theta_D.values, second.theta_D.values)
    assert first.history == second.history


def test_thread_count_does_not_change_result(two_k5, quick_config):
    idx = enumerate_cliques(two_k5, 3)
    serial = train(two_k5, idx, quick_config)
    threaded_cfg = quick_config.with_communities(2)
    threaded_cfg.threads = 4
    threaded = train(two_k5, idx, threaded_cfg)
    assert np.array_equal(serial.theta_G.values, threaded.theta_G.values)
    assert np.array_equal(serial.theta_D.values, threaded.theta_D.values)


def test_affiliations_stay_nonnegative(two_k5, quick_config):
    state = train(two_k5, enumerate_cliques(two_k5, 3), quick_config)
    assert state.theta_G.is_valid()
    assert state.theta_D.is_valid()
    assert len(state.g_rewards) == len(state.d_objectives) == 3
    assert all(r <= 0.0 for r in state.g_rewards)


def test_policy_gradient_favours_the_sample(two_k5, quick_config, rng):
    trainer = CommunityTrainer(two_k5, enumerate_cliques(two_k5, 3),
                               quick_config)
    theta_G = AffiliationMatrix(rng.uniform(0.2, 1.0, size=(10, 2)))
    theta_D = AffiliationMatrix(rng.uniform(0.5, 1.0, size=(10, 2)))
    sample = generate_subset(two_k5, theta_G, 3, 3, rng=rng)
    before = sample_log_prob(two_k5, theta_G, sample)
    reward = trainer.policy_gradient_update(theta_G, theta_D, sample)
    assert reward < 0.0
    assert sample_log_prob(two_k5, theta_G, sample) >= before


def test_listeners_see_every_iteration(two_k5, quick_config):
    listener = JSONTrainingListener()
    train(two_k5, enumerate_cliques(two_k5, 3), quick_config, [listener])
    history = listener.json()
    assert [i['iteration'] for i in history['iterations']] == [1, 2, 3]
    assert history['communities'] == 2
    assert history['final_iteration'] == 3


def test_listener_type_is_checked(two_k5, quick_config):
    trainer = CommunityTrainer(two_k5, enumerate_cliques(two_k5, 3),
                               quick_config)
    with pytest.raises(RuntimeError):
        trainer.add_listener(object())


def test_graph_without_cliques(path4, quick_config):
    with pytest.raises(NoCliquesError) as e:
        CommunityTrainer(path4, enumerate_cliques(path4, 3), quick_config)
    assert e.value.exit_code == 2


def test_clique_size_must_match(two_k5, quick_config):
    with pytest.raises(ParameterError):
        CommunityTrainer(two_k5, enumerate_cliques(two_k5, 4), quick_config)


def test_auto_needs_resolving(two_k5):
    with pytest.raises(ParameterError):
        CommunityTrainer(two_k5, enumerate_cliques(two_k5, 3), TrainConfig())


def test_convergence_window(two_k5, quick_config):
    trainer = CommunityTrainer(two_k5, enumerate_cliques(two_k5, 3),
                               quick_config)
    assert not trainer.has_converged([-1.0] * 5)
    assert trainer.has_converged([-1.0] * 6)
    assert not trainer.has_converged([-1.0] * 5 + [-0.5])


def test_holdout_split(two_k5, rng):
    train_graph, train_idx, held = holdout_split(two_k5, 3, rng)
    assert len(held) == 4
    assert train_graph.edge_count == two_k5.edge_count - 4
    for u, v in held:
        assert two_k5.has_edge(u, v)
        assert not train_graph.has_edge(u, v)
    assert len(train_idx) > 0


def test_single_candidate_is_taken(two_k5, quick_config):
    idx = enumerate_cliques(two_k5, 3)
    assert select_community_count(two_k5, idx, [4], quick_config) == 4


def test_candidate_scores(two_k5, quick_config):
    idx = enumerate_cliques(two_k5, 3)
    cfg = quick_config.with_communities(2)
    cfg.max_iterations = 1
    scores = score_community_counts(two_k5, idx, [2, 3], cfg)
    assert sorted(scores) == [2, 3]
    assert all(np.isfinite(list(scores.values())))


def hold_out_two_paths(g, clique_size, rng):
    held = [(0, 1), (1, 2), (5, 6), (6, 7)]
    kept = [e for e in g.edges() if e not in held]
    train_graph = Graph.from_edges(g.vertex_count, kept)
    return (train_graph, enumerate_cliques(train_graph, clique_size),
            np.array(held, dtype=np.int64))


@pytest.mark.parametrize('seed', range(3))
def test_disjoint_k5s_select_two(monkeypatch, seed):
    # Vertices 3 and 8 keep their whole block as neighborhood, so every
    # count above 2 only repeats the two blocks
    g = Graph.from_edges(10, complete_edges(range(5)) +
                         complete_edges(range(5, 10)))
    monkeypatch.setattr("motif_agm.trainer.holdout_split",
                        hold_out_two_paths)
    cfg = TrainConfig(init='locally-minimal', max_iterations=0, seed=seed)
    idx = enumerate_cliques(g, 3)
    scores = score_community_counts(g, idx, [1, 2, 4], cfg)
    assert scores[2] == scores[4]
    assert scores[1] < scores[2]
    assert select_community_count(g, idx, [1, 2, 4], cfg) == 2


def test_auto_resolves_before_training(two_k5, quick_config):
    cfg = quick_config.with_communities('auto')
    cfg.community_candidates = (3,)
    state = train(two_k5, enumerate_cliques(two_k5, 3), cfg)
    assert state.theta_G.cols == 3


def test_best_community_count_prefers_smaller_on_ties():
    assert best_community_count({8: -1.5, 4: -1.0, 2: -1.0}) == 2
    assert best_community_count({8: -0.5, 4: -1.0}) == 8
    with pytest.raises(ParameterError):
        best_community_count({})


def test_every_inner_update_draws_fresh_samples(two_k5, quick_config,
                                                 monkeypatch):
    generated, positives = [], []
    generate_all = CommunityTrainer.generate_all
    positives_for_vertex = CommunityTrainer.positives_for_vertex

    def spy_generate(self, theta_G, count, iteration, phase, inner=0):
        generated.append((iteration, phase, inner))
        return generate_all(self, theta_G, count, iteration, phase, inner)

    def spy_positives(self, v, iteration, inner=0):
        positives.append((iteration, inner))
        return positives_for_vertex(self, v, iteration, inner)

    monkeypatch.setattr(CommunityTrainer, 'generate_all', spy_generate)
    monkeypatch.setattr(CommunityTrainer, 'positives_for_vertex',
                        spy_positives)
    cfg = quick_config.with_communities(2)
    cfg.max_iterations = 1
    cfg.inner_updates = 3
    train(two_k5, enumerate_cliques(two_k5, 3), cfg)
    assert sorted(generated) == sorted(
        [(1, phase, inner) for phase in (G_PHASE, D_PHASE)
         for inner in range(3)])
    assert len(positives) == 3 * 10
    assert sorted(set(positives)) == [(1, 0), (1, 1), (1, 2)]


def test_reward_is_raw_unless_floored(two_k5, quick_config, rng):
    theta_G = AffiliationMatrix(rng.uniform(0.2, 1.0, size=(10, 2)))
    theta_D = AffiliationMatrix(np.full((10, 2), 3.0))
    sample = generate_subset(two_k5, theta_G, 3, 3, rng=rng)
    idx = enumerate_cliques(two_k5, 3)
    raw = CommunityTrainer(two_k5, idx, quick_config)
    assert raw.reward(theta_D, sample) == pytest.approx(-54.0)

    cfg = quick_config.with_communities(2)
    cfg.reward_floor = -10.0
    floored = CommunityTrainer(two_k5, idx, cfg)
    assert floored.reward(theta_D, sample) == -10.0


def test_training_resumes_from_given_affiliations(two_k5, quick_config,
                                                  rng):
    theta_G = AffiliationMatrix(rng.uniform(0.0, 1.0, size=(10, 3)))
    theta_D = AffiliationMatrix(rng.uniform(0.0, 1.0, size=(10, 3)))
    cfg = quick_config.with_communities('auto')
    cfg.max_iterations = 0
    state = train(two_k5, enumerate_cliques(two_k5, 3), cfg,
                  initial=(theta_G, theta_D))
    assert state.theta_G.cols == 3
    assert state.pretrain_history == []
    assert np.array_equal(state.theta_G.values, theta_G.values)
    assert state.theta_G is not theta_G


def test_resume_shape_must_match(two_k5, quick_config):
    theta = AffiliationMatrix.zeros(10, 3)
    with pytest.raises(ParameterError):
        train(two_k5, enumerate_cliques(two_k5, 3), quick_config,
              initial=(theta, theta))
