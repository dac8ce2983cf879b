import numpy as np
import pytest

from kregret import (Dataset, DomainError, GreedyConfig, compute_contour, max_ratio_exact_2d,
                     normalize, sample_directions, solve_2d, solve_greedy, worst_point)
from kregret.evaluator import Sampled
from oracles import BRYANT, DURANT, WADE, random_instance


def test_worst_point_nba(nba_pr):
    wp = worst_point([BRYANT, DURANT, WADE], nba_pr, 1)
    assert wp.ratio == pytest.approx(max_ratio_exact_2d([BRYANT, DURANT, WADE], nba_pr, 1).max_ratio)
    assert wp.direction.is_unit
    x, y = wp.point
    assert np.hypot(x, y) == pytest.approx(wp.delta)


def test_greedy_2d_vs_optimum(rng):
    for _ in range(25):
        n = int(rng.integers(3, 14))
        D = Dataset.from_rows(random_instance(rng, n))
        k, m = int(rng.integers(1, 3)), int(rng.integers(1, 4))
        g = solve_greedy(D, k, m)
        opt = solve_2d(D, k, m)
        assert g.cost >= opt.cost - 1e-9
        assert g.cost == pytest.approx(max_ratio_exact_2d(g.ids, D, k).max_ratio, abs=1e-12)
        assert len(g.ids) <= m
        if opt.cost == 0.0 and g.early_exit:
            assert g.cost == 0.0


def test_trace_strictly_decreasing(rng):
    for d in (3, 4):
        D = Dataset.from_rows(random_instance(rng, 25, d))
        cfg = GreedyConfig(samples=sample_directions(d, 2000))
        sol = solve_greedy(D, 1, 3, cfg)
        trace = sol.trace
        assert all(b < a * (1 - cfg.epsilon) for a, b in zip(trace, trace[1:]))
        assert not sol.warnings
        assert sol.exactness == f"sampled({2000 + d + 1})"


def test_deterministic(nba_raw):
    D = normalize(nba_raw)
    cfg = GreedyConfig(samples=1000)
    assert solve_greedy(D, 1, 2, cfg) == solve_greedy(D, 1, 2, cfg)


def test_early_exit_on_witnesses(nba_pr):
    sol = solve_greedy(nba_pr, 2, 4)
    assert sol.early_exit and set(sol.ids) == compute_contour(nba_pr, 2).contributor_ids
    assert sol.cost <= 1e-12


def test_seeds(nba_pr):
    # k=2, m=2: four contour lines, so no early exit
    explicit = solve_greedy(nba_pr, 2, 2, GreedyConfig(seed=[WADE, BRYANT]))
    assert explicit.trace[0] == pytest.approx(max_ratio_exact_2d([WADE, BRYANT], nba_pr, 2).max_ratio)
    assert explicit.cost < explicit.trace[0]
    rand = solve_greedy(nba_pr, 2, 2, GreedyConfig(seed="random", random_seed=3))
    assert len(rand.ids) <= 2 and rand.trace
    with pytest.raises(DomainError):
        solve_greedy(nba_pr, 2, 2, GreedyConfig(seed="best"))
    with pytest.raises(DomainError):
        solve_greedy(nba_pr, 2, 2, GreedyConfig(seed=[WADE, BRYANT, DURANT]))


def test_config_validation(nba_pr):
    with pytest.raises(DomainError):
        GreedyConfig(epsilon=0.0)
    with pytest.raises(DomainError):
        GreedyConfig(evaluator="fancy")
    with pytest.raises(DomainError):
        solve_greedy(normalize(Dataset.from_rows(np.ones((3, 3)) * 0.5)), 1, 1,
                     GreedyConfig(evaluator="exact"))
    with pytest.raises(DomainError):
        solve_greedy(nba_pr, 0, 1)


def test_pass_guard(rng):
    D = Dataset.from_rows(random_instance(rng, 30, 3))
    sol = solve_greedy(D, 1, 3, GreedyConfig(max_passes=1, samples=500))
    assert sol.warnings and "max_passes" in sol.warnings[0]


def test_full_dataset(nba_pr):
    sol = solve_greedy(nba_pr, 1, 8)
    assert sol.cost == 0.0 and len(sol.ids) == 8


def test_sampled_witness_early_exit(rng):
    X = random_instance(rng, 10, 3)
    D = Dataset.from_rows(X)
    samples = sample_directions(3, 800)
    w = Sampled(D, 1, samples).rank_k_witnesses()
    sol = solve_greedy(D, 1, len(w), GreedyConfig(samples=samples))
    if len(w) < D.n:
        assert sol.early_exit and sol.cost == 0.0
