import numpy as np
import pytest

from fselect.association import cvtest
from fselect.dataset import from_codes
from fselect.engine import EngineConfig, ParallelEngine
from fselect.selector import (
    MMAIQ_EPS,
    Objective,
    RankedFeature,
    SelectionReport,
    expected_calls,
    relevance_vector,
    score_curve,
    select,
    select_traced,
    step_score,
)
from fselect.synthetic import duplicate_feature_dataset, random_discrete
from oracles import greedy_bruteforce, v_of_columns


def four_feature_data():
    rng = np.random.default_rng(7)
    labels = np.tile([0, 1], 20)
    x0 = labels.copy()
    x1 = rng.integers(0, 2, 40)
    x2 = labels.copy()
    x2[5] = 1 - x2[5]
    x3 = np.zeros(40, dtype=int)
    return from_codes(np.column_stack([x0, x1, x2, x3]), labels)


def test_relevance_vector(engine):
    data = four_feature_data()
    rel = relevance_vector(data, engine)
    oracle = [v_of_columns(data.codes[:, j], data.label_codes) for j in range(4)]
    np.testing.assert_allclose(rel, oracle, atol=1e-12)
    assert rel[0] == 1.0 and rel[3] == 0.0
    assert list(np.argsort(-rel, kind="stable")) == [0, 2, 1, 3]


def test_step_score_arithmetic():
    assert step_score(Objective("mmais", 1.0), 0.8, 0.6, 3) == pytest.approx(0.5)
    assert step_score(Objective("mmaiq"), 0.8, 0.0, 2) == 0.8 / MMAIQ_EPS


def test_objectives_disagree():
    # A: relevance 0.9, mean redundancy 0.49; B: relevance 0.5, mean redundancy 0.1
    rel = np.array([0.9, 0.5])
    red = np.array([0.49, 0.1])
    s = step_score(Objective("mmais", 1.0), rel, red, 2)
    q = step_score(Objective("mmaiq"), rel, red, 2)
    # hand: mmais 0.41 vs 0.40 -> A; mmaiq 1.837 vs 5.0 -> B
    assert s == pytest.approx([0.41, 0.40])
    assert q == pytest.approx([0.9 / 0.49, 5.0])
    assert np.argmax(s) == 0 and np.argmax(q) == 1


def test_objective_validation():
    with pytest.raises(ValueError):
        Objective("mrmr")
    with pytest.raises(ValueError):
        Objective("mmais", 0.0)


def test_k1_is_argmax_relevance(engine, rng):
    data = random_discrete(rng, 8, 30)
    rep = select(data, Objective(), 1, engine)
    rel = relevance_vector(data, engine)
    rel[data.cards <= 1] = -1
    assert rep.indices == [int(np.argmax(rel))]


def test_duplicate_not_second(engine):
    for seed in range(10):
        data = duplicate_feature_dataset(seed=seed, noise_features=3)
        rep, trace = select_traced(data, Objective("mmaiq"), 3, engine)
        assert rep.indices[0] == 0
        assert rep.indices[1] != 1
        # exhaustive evaluation of the quotient at step 2
        rel = [v_of_columns(data.codes[:, j], data.label_codes) for j in range(data.m)]
        q = {j: rel[j] / max(v_of_columns(data.codes[:, j], data.codes[:, 0]), MMAIQ_EPS) for j in range(1, data.m)}
        assert q[1] == pytest.approx(rel[1])
        assert max(q, key=q.get) == rep.indices[1]


@pytest.mark.parametrize("kind", ["mmaiq", "mmais"])
def test_greedy_matches_bruteforce(engine, kind):
    rng = np.random.default_rng(99)
    for _ in range(40):
        m = int(rng.integers(1, 7))
        data = random_discrete(rng, m, int(rng.integers(4, 41)))
        lam = float(rng.choice([0.5, 1.0, 2.0]))
        rep = select(data, Objective(kind, lam), m, engine)

        def v_pair(i, j):
            return cvtest(data.column(i), data.column(j), data.cards[i], data.cards[j]).v

        rel = relevance_vector(data, engine)
        ranking, scores = greedy_bruteforce(data, kind, lam, m, v_pair, rel=list(rel))
        assert rep.indices == ranking
        assert [f.score for f in rep.ranking] == scores


def test_accumulator_exact(engine, rng):
    data = random_discrete(rng, 12, 60, max_card=5)
    rep, trace = select_traced(data, Objective("mmais"), 6, engine)
    state = trace.state
    for j in state.unselected():
        direct = 0.0
        for i in state.selected[:-1]:
            direct += cvtest(data.column(j), data.column(i), data.cards[j], data.cards[i]).v
        assert state.red_sum[j] == direct


def test_mmaiq_lambda_invariant(engine, rng):
    for _ in range(10):
        data = random_discrete(rng, 10, 50)
        base = select(data, Objective("mmaiq", 1.0), 10, engine).indices
        for lam in (0.1, 10.0):
            assert select(data, Objective("mmaiq", lam), 10, engine).indices == base


@pytest.mark.parametrize("kind", ["mmaiq", "mmais"])
def test_prefix_monotone(engine, rng, kind):
    data = random_discrete(rng, 9, 80)
    prev = []
    for k in range(1, 10):
        cur = select(data, Objective(kind), k, engine).indices
        assert cur[: len(prev)] == prev
        prev = cur


@pytest.mark.parametrize("m,k", [(1, 1), (5, 1), (5, 5), (20, 7), (40, 40)])
def test_call_count(m, k):
    rng = np.random.default_rng(m * 100 + k)
    codes = rng.integers(0, 3, size=(50, m))
    codes[0] = 0
    codes[1] = 1
    data = from_codes(codes, rng.integers(0, 2, 50))
    with ParallelEngine(EngineConfig(1)) as eng:
        select(data, Objective(), k, eng)
        assert eng.calls == expected_calls(m, k) == m + sum(m - p + 1 for p in range(2, k + 1))


def test_constants_never_selected_and_truncation(engine):
    labels = np.array([0, 1] * 10)
    codes = np.column_stack([np.zeros(20, int), labels, np.ones(20, int), (np.arange(20) % 3)])
    data = from_codes(codes, labels)
    rep = select(data, Objective(), 4, engine)
    assert rep.indices == [1, 3]
    assert any("truncated" in w for w in rep.warnings)
    assert engine.calls == expected_calls(4, 2)


def test_k_out_of_range(engine, rng):
    data = random_discrete(rng, 3, 10)
    with pytest.raises(ValueError):
        select(data, Objective(), 0, engine)
    with pytest.raises(ValueError):
        select(data, Objective(), 4, engine)


def report_of(rels, pair_v):
    ranking = [RankedFeature(i, f"x{i}", r, r, 0.0) for i, r in enumerate(rels)]
    return SelectionReport(ranking, Objective(), len(rels), [], np.array(pair_v, dtype=float))


def test_score_curve_examples():
    assert score_curve(report_of([0.7], [[1.0]])) == [(1, 0.7, 1.0)]
    curve = score_curve(report_of([0.6, 0.4], [[1, 0], [0, 1]]))
    assert curve[1] == (2, pytest.approx(0.5), pytest.approx(0.5))


def test_score_curve_duplicate_inflates_redundancy(engine):
    data = duplicate_feature_dataset(seed=3, noise_features=2)
    rep = select(data, Objective("mmaiq"), 2, engine)
    assert rep.indices[1] != 1
    excluded = [0, 2, 3]
    forced = [0, 1, 2]

    def prefix_r(idx):
        total = sum(v_of_columns(data.codes[:, a], data.codes[:, b]) for a in idx for b in idx)
        return total / len(idx) ** 2

    assert prefix_r(forced) > prefix_r(excluded)
    assert score_curve(rep)[-1][2] == pytest.approx(prefix_r(rep.indices), abs=1e-12)


def test_pair_v_matches_direct(engine, rng):
    data = random_discrete(rng, 8, 60)
    rep = select(data, Objective("mmais"), 5, engine)
    idx = rep.indices
    for a in range(len(idx)):
        for b in range(len(idx)):
            expected = 1.0 if a == b else cvtest(data.column(idx[a]), data.column(idx[b])).v
            assert rep.pair_v[a, b] == expected
