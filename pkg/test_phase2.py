#!/usr/bin/env python3
"""
Phase 2 Test Script
Test extremal optimization, P scoring, overlap, the exact oracle and aggregation
"""

import math
import os
import sys
from types import SimpleNamespace

import networkx as nx
import numpy as np
import pytest

# Add current directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from evaluation import (
    ALPHA_GW,
    P_STAR,
    OracleSizeError,
    ScoringError,
    aggregate,
    exact_maxcut,
    exact_maxcut_gray,
    overlap,
    overlap_matrix,
    p_score,
    p_value,
    pairwise_overlap_stats,
)
from graphs import Graph, cut_value, generate_regular
from solvers import (
    EoParams,
    SolverParameterError,
    eo_initialization_study,
    eo_run,
    fitness,
    rank_distribution,
)
from solvers.eo import _RankedSpins


def _k3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def _c5() -> Graph:
    return Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], d=2)


# ════════════════════════════════════════════════════════════
# FITNESS AND RANKS
# ════════════════════════════════════════════════════════════

def test_fitness_examples():
    print("\n" + "=" * 60)
    print("TEST 1: Fitness and rank distribution")
    print("=" * 60)

    state = fitness(_k3(), [1, 1, -1])
    assert np.allclose(state.lam, [0.5, 0.5, 1.0])
    assert list(state.bad + state.good) == [2, 2, 2]

    g = generate_regular(10, 3, seed=0)
    x = np.ones(10, dtype=int)
    v = 0
    x[v] = -1
    lam = fitness(g, x).lam
    assert lam[v] == 1.0
    for u in g.neighbors(v):
        assert lam[u] == pytest.approx(1 / 3)
    print("✓ lambda = b/d, isolated flip gives 1 and 1/3")


def test_fitness_sum_is_twice_the_cut():
    rng = np.random.default_rng(1)
    for t in range(50):
        g = generate_regular(30, 4, seed=t)
        x = rng.choice([-1, 1], size=30)
        state = fitness(g, x)
        assert int(round(state.lam.sum() * 4)) == 2 * cut_value(g, x)


def test_ranking_ascends_with_index_ties():
    state = fitness(_k3(), [1, 1, -1])
    assert list(state.ranking()) == [0, 1, 2]


def test_rank_distribution_examples():
    assert np.allclose(rank_distribution(1, 1.4), [1.0])
    assert np.allclose(rank_distribution(4, 0.0), [0.25] * 4)
    p = rank_distribution(3, 1.4)
    assert np.allclose(p, [0.6274, 0.2378, 0.1348], atol=1e-4)
    assert abs(rank_distribution(1000, 1.4).sum() - 1.0) < 1e-12
    with pytest.raises(SolverParameterError):
        rank_distribution(0, 1.4)


# ════════════════════════════════════════════════════════════
# EXTREMAL OPTIMIZATION
# ════════════════════════════════════════════════════════════

def test_eo_small_examples():
    print("\n" + "=" * 60)
    print("TEST 2: Extremal optimization")
    print("=" * 60)

    k4 = generate_regular(4, 3, seed=0)
    for seed in range(10):
        assert eo_run(k4, EoParams(t_max=20, seed=seed)).best_cut == 4

    edge = Graph.from_edges(2, [(0, 1)])
    for seed in range(10):
        assert eo_run(edge, EoParams(t_max=2, restarts=1, seed=seed)).best_cut == 1
    print("✓ K4 reaches 4, single edge reaches 1 within 2 steps")


def test_incremental_fitness_matches_recomputation():
    rng = np.random.default_rng(5)
    for t in range(5):
        g = generate_regular(16, 3, seed=40 + t)
        spins = rng.choice([-1, 1], size=16).tolist()
        state = _RankedSpins(g, list(spins))
        for _ in range(200):
            state.flip(int(rng.integers(16)))
            fresh = fitness(g, state.x)
            assert state.bad == list(fresh.bad)
            assert state.cut == cut_value(g, state.x)
            assert [state.vertex_at(k) for k in range(16)] == list(fresh.ranking())


def test_eo_result_consistency():
    g = generate_regular(40, 3, seed=3)
    res = eo_run(g, EoParams(t_max=4000, restarts=3, seed=11))
    assert res.best_cut == cut_value(g, res.best)
    assert res.best_cut == max(res.restart_cuts)
    assert len(res.restart_cuts) == 3
    assert set(np.unique(res.best)) <= {-1, 1}


def test_eo_is_deterministic_with_trace():
    g = generate_regular(30, 3, seed=9)
    p = EoParams(tau=1.4, t_max=3000, restarts=2, seed=123, trace=True)
    a = eo_run(g, p)
    b = eo_run(g, p)
    assert a.trace == b.trace
    assert np.array_equal(a.best, b.best)
    steps = [s for s, _ in a.trace]
    assert steps[0] == 0 and all(s % 30 == 0 for s in steps)
    assert len(steps) == 1 + 3000 // 30
    # trace records the current cut, never above the best seen
    assert max(c for _, c in a.trace) <= a.best_cut


def test_eo_gated_variant_runs():
    g = generate_regular(30, 3, seed=2)
    res = eo_run(g, EoParams(t_max=2000, seed=1, gated=True))
    assert res.best_cut == cut_value(g, res.best)


def test_eo_parameter_validation():
    g = generate_regular(6, 3, seed=0)
    for bad in (EoParams(tau=0.0), EoParams(t_max=0), EoParams(restarts=0)):
        with pytest.raises(SolverParameterError):
            eo_run(g, bad)


def test_eo_reaches_exact_optimum_on_small_graphs():
    hits = 0
    for t in range(20):
        g = generate_regular(12, 3, seed=500 + t)
        best = eo_run(g, EoParams(tau=1.4, t_max=5000, restarts=2, seed=t)).best_cut
        opt, _ = exact_maxcut(g)
        assert best <= opt
        hits += best == opt
    assert hits >= 19


def test_eo_initialization_study():
    g = generate_regular(40, 3, seed=17)
    study = eo_initialization_study(g, EoParams(t_max=2000, seed=4), runs=5)
    assert len(study.cuts) == 5 and len(study.configs) == 5
    assert study.max_P >= study.min_P
    assert study.max_P == pytest.approx(p_value(max(study.cuts), 40, 3))
    assert 0.0 <= study.overlap_mean <= 1.0
    assert study.overlap_std >= 0.0
    with pytest.raises(SolverParameterError):
        eo_initialization_study(g, EoParams(), runs=0)


# ════════════════════════════════════════════════════════════
# SCORING
# ════════════════════════════════════════════════════════════

def test_p_score_fixed_points():
    print("\n" + "=" * 60)
    print("TEST 3: P statistic and overlap")
    print("=" * 60)

    for n, d in [(100, 3), (500, 10), (64, 4)]:
        assert p_value(n * d / 4, n, d) == pytest.approx(0.0, abs=1e-12)
        assert p_value(n * (d / 4 + math.sqrt(d / 4)), n, d) == pytest.approx(1.0, abs=1e-12)

    z = 500 * (3 / 4 + 0.7266 * math.sqrt(3 / 4))
    score = p_score(z, 500, 3)
    assert str(score) == "0.7266"
    assert score.gap_to_optimum == pytest.approx(P_STAR - 0.7266)
    assert ALPHA_GW == 0.878
    with pytest.raises(ScoringError):
        p_score(1, 0, 3)
    print("✓ P = 0 and P = 1 fixed points, 4-decimal rendering")


def test_overlap_examples():
    x = np.array([1, 1, -1, -1])
    assert overlap(x, x).nu == 1.0
    assert overlap(x, -x).nu == 1.0
    assert overlap(x, [1, -1, 1, -1]).nu == 0.0
    with pytest.raises(ScoringError):
        overlap(x, [1, 1])


def test_overlap_symmetry_and_flip_invariance():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a = rng.choice([-1, 1], size=25)
        b = rng.choice([-1, 1], size=25)
        nu = overlap(a, b).nu
        assert nu == overlap(b, a).nu == overlap(-a, b).nu == overlap(a, -b).nu
        assert 0.0 <= nu <= 1.0


def test_overlap_matrix_and_stats():
    configs = [[1, 1, 1, 1], [1, 1, -1, -1], [-1, -1, -1, -1]]
    m = overlap_matrix(configs)
    assert np.allclose(np.diag(m), 1.0)
    assert np.allclose(m, m.T)
    mean, std = pairwise_overlap_stats(configs)
    # pairs: (0,1) -> 0, (0,2) -> 1, (1,2) -> 0
    assert mean == pytest.approx(1 / 3)
    assert std == pytest.approx(math.sqrt(2 / 9))


# ════════════════════════════════════════════════════════════
# EXACT ORACLE
# ════════════════════════════════════════════════════════════

def test_exact_maxcut_examples():
    print("\n" + "=" * 60)
    print("TEST 4: Exact oracle")
    print("=" * 60)

    value, x = exact_maxcut(Graph.from_edges(2, [(0, 1)]))
    assert value == 1 and list(x) == [1, -1]
    assert exact_maxcut(generate_regular(4, 3, seed=0))[0] == 4
    value, x = exact_maxcut(_c5())
    assert value == 4
    assert x[0] == 1 and cut_value(_c5(), x) == 4
    print("✓ Edge 1, K4 4, C5 4")


def test_exact_maxcut_tie_break_is_lexicographic():
    value, x = exact_maxcut(_k3())
    assert value == 2
    # x_0 = +1 fixed; smallest of the optimal (+,-,-), (+,-,+), (+,+,-) reading -1 < +1
    assert list(x) == [1, -1, -1]


def test_oracles_agree():
    rng = np.random.default_rng(12)
    for t in range(100):
        n = int(rng.choice([6, 8, 10, 12]))
        d = int(rng.choice([3, 4]))
        g = generate_regular(n, d, seed=1000 + t)
        value, x = exact_maxcut(g)
        assert value == exact_maxcut_gray(g)
        assert value == cut_value(g, x)
        # any heuristic cut is a lower bound
        _, (s1, _) = nx.algorithms.approximation.one_exchange(
            nx.Graph(list(g.edges)), seed=t
        )
        assert nx.cut_size(nx.Graph(list(g.edges)), s1) <= value


def test_weighted_oracle():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)],
                         weights=[1.0, 2.0, 1.0, 2.0, 5.0])
    value, x = exact_maxcut(g)
    assert value == pytest.approx(exact_maxcut_gray(g))
    assert value == pytest.approx(cut_value(g, x))


def test_oracle_size_cap():
    g = generate_regular(26, 3, seed=0)
    with pytest.raises(OracleSizeError):
        exact_maxcut(g)
    with pytest.raises(OracleSizeError):
        exact_maxcut_gray(g)


# ════════════════════════════════════════════════════════════
# AGGREGATION
# ════════════════════════════════════════════════════════════

def _record(method, n, d, P, error=""):
    return SimpleNamespace(method=method, n=n, d=d, P=P, error=error)


def test_aggregate_examples():
    print("\n" + "=" * 60)
    print("TEST 5: Aggregation")
    print("=" * 60)

    [one] = aggregate([_record("eo", 100, 3, 0.71)])
    assert (one.count, one.mean_P, one.std_P) == (1, 0.71, 0.0)

    [two] = aggregate([_record("sdp", 100, 3, 0.7), _record("sdp", 100, 3, 0.8)])
    assert two.mean_P == pytest.approx(0.75)
    assert two.std_P == pytest.approx(0.05)
    assert (two.min_P, two.max_P) == (0.7, 0.8)
    print("✓ Single record and two-point population std")


def test_aggregate_ordering_failures_and_empty_groups():
    records = [
        _record("sdp", 200, 3, 0.70),
        _record("eo", 200, 3, 0.72),
        _record("eo", 100, 3, 0.71),
        _record("eo", 100, 3, None, error="RuntimeError: boom"),
    ]
    summaries = aggregate(records, expected_groups=[("gnn-pg", 100, 3)])
    assert [s.key() for s in summaries] == [("eo", 100, 3), ("eo", 200, 3), ("sdp", 200, 3)]
    assert summaries[0].count == 1


def test_aggregate_statistical_self_check():
    rng = np.random.default_rng(2024)
    values = rng.normal(0.7, 0.02, size=1000)
    [s] = aggregate([_record("eo", 500, 3, float(v)) for v in values])
    assert s.count == 1000
    assert abs(s.mean_P - 0.7) < 3 * 0.02 / math.sqrt(1000)
    assert s.std_P == pytest.approx(float(values.std()))


def main():
    """Run all Phase 2 tests."""
    print("\n")
    print("╔" + "=" * 58 + "╗")
    print("║" + " " * 58 + "║")
    print("║" + "  RegCut Phase 2 Test Suite".center(58) + "║")
    print("║" + "  Extremal Optimization + Evaluation".center(58) + "║")
    print("║" + " " * 58 + "║")
    print("╚" + "=" * 58 + "╝")

    test_fitness_examples()
    test_fitness_sum_is_twice_the_cut()
    test_ranking_ascends_with_index_ties()
    test_rank_distribution_examples()
    test_eo_small_examples()
    test_incremental_fitness_matches_recomputation()
    test_eo_result_consistency()
    test_eo_is_deterministic_with_trace()
    test_eo_gated_variant_runs()
    test_eo_parameter_validation()
    test_eo_reaches_exact_optimum_on_small_graphs()
    test_eo_initialization_study()
    test_p_score_fixed_points()
    test_overlap_examples()
    test_overlap_symmetry_and_flip_invariance()
    test_overlap_matrix_and_stats()
    test_exact_maxcut_examples()
    test_exact_maxcut_tie_break_is_lexicographic()
    test_oracles_agree()
    test_weighted_oracle()
    test_oracle_size_cap()
    test_aggregate_examples()
    test_aggregate_ordering_failures_and_empty_groups()
    test_aggregate_statistical_self_check()

    print("\n" + "=" * 60)
    print("Phase 2 Testing Complete")
    print("=" * 60)


if __name__ == "__main__":
    main()
