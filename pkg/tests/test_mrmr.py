import itertools
import math

import numpy as np
import pytest
from conftest import make_dataset
from hypothesis import given
from hypothesis import strategies as st
from oracles import entropy_oracle, mi_oracle, mrmr_oracle

from ecwsa.model import whale_from_features
from ecwsa.mrmr import (
    WORST_SCORE,
    DiscretizedDataset,
    discretize,
    entropy,
    local_search,
    make_neighbors,
    mrmr_fitness,
    mutual_information,
)

discrete = st.lists(st.integers(0, 5), min_size=1, max_size=40)


def test_discretize_constant():
    assert discretize([3, 3, 3], 4).tolist() == [0, 0, 0]


def test_discretize_identity_bins():
    assert discretize(np.arange(10), 10).tolist() == list(range(10))


def test_discretize_endpoints():
    assert discretize([0, 10], 2).tolist() == [0, 1]


def test_discretize_errors():
    with pytest.raises(ValueError):
        discretize([], 3)
    with pytest.raises(ValueError):
        discretize([1, 2], 1)


def test_mi_identical_binary():
    assert mutual_information([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(math.log(2), abs=1e-12)


def test_mi_independent():
    assert mutual_information([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)


def test_mi_length_mismatch():
    with pytest.raises(ValueError):
        mutual_information([0, 1], [0])


@given(discrete)
def test_self_information_is_entropy(u):
    assert mutual_information(u, u) == pytest.approx(entropy(u), abs=1e-12)
    assert entropy(u) == pytest.approx(entropy_oracle(u), abs=1e-12)


@given(st.integers(1, 40).flatmap(lambda n: st.tuples(*(st.lists(st.integers(0, 4), min_size=n, max_size=n),) * 2)))
def test_mi_properties(pair):
    u, v = pair
    mi = mutual_information(u, v)
    assert mi == pytest.approx(mutual_information(v, u), abs=1e-12)
    assert mi == pytest.approx(mi_oracle(u, v), abs=1e-12)
    assert -1e-12 <= mi <= min(entropy(u), entropy(v)) + 1e-12


def _discretized(n_features=8, n=60, seed=0):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 3, n)
    X = rng.random((n, n_features))
    X[:, 0] += y
    X[:, 1] = X[:, 0] * 0.9 + 0.1 * rng.random(n)
    return DiscretizedDataset.from_dataset(make_dataset(X, y), mi_bins=5)


def test_singleton_score():
    d = _discretized()
    expected = mi_oracle(d.bins[:, 2].tolist(), d.labels.tolist()) - entropy_oracle(d.bins[:, 2].tolist())
    assert mrmr_fitness({2}, d) == pytest.approx(expected, abs=1e-12)


def test_duplicated_feature_pair():
    rng = np.random.default_rng(1)
    y = rng.integers(0, 2, 50)
    f = rng.integers(0, 4, 50)
    d = DiscretizedDataset(np.column_stack([f, f]), y, mi_bins=4)
    rho = mi_oracle(f.tolist(), y.tolist())
    assert mrmr_fitness({0, 1}, d) == pytest.approx(rho - entropy_oracle(f.tolist()), abs=1e-12)


def test_empty_set_is_worst():
    assert mrmr_fitness(set(), _discretized()) == WORST_SCORE


def test_mrmr_matches_oracle_on_all_subsets():
    d = _discretized()
    cols = [d.bins[:, j].tolist() for j in range(d.n_features)]
    labels = d.labels.tolist()
    for r in range(1, 9):
        for subset in itertools.combinations(range(8), r):
            assert mrmr_fitness(subset, d) == pytest.approx(mrmr_oracle(subset, cols, labels), abs=1e-10)


def test_cache_is_pure_memo():
    warm = _discretized(seed=3)
    for s in [(0, 1, 2), (3, 4), (0, 5, 6, 7)]:
        first = mrmr_fitness(s, warm)
        cold = _discretized(seed=3)
        assert mrmr_fitness(s, cold) == first
        assert mrmr_fitness(s, warm) == first


def test_neighbors_example():
    n1, n2 = make_neighbors({1, 3}, {2, 4}, {4})
    assert n1 == {1, 2, 3}
    assert n2 == {1, 3}


def test_neighbors_empty_difference():
    n1, n2 = make_neighbors({1, 3}, {2, 4}, {2, 4})
    assert n1 == n2 == {1, 3}


def test_neighbors_empty_base():
    n1, n2 = make_neighbors(set(), {2, 4}, {4})
    assert n1 == {2}
    assert n2 == set()


def test_local_search_unchanged_when_others_identical():
    d = _discretized()
    pop = [whale_from_features(s, 8) for s in ({0, 1}, {2, 3}, {2, 3})]
    out = local_search(pop, d, np.random.default_rng(0))
    assert out[0] is pop[0]


def test_local_search_drops_noise():
    rng = np.random.default_rng(5)
    y = np.repeat([0, 1], 40)
    X = np.column_stack([y, rng.random((80, 3))])
    d = DiscretizedDataset.from_dataset(make_dataset(X, y), mi_bins=4)
    cols = [d.bins[:, j].tolist() for j in range(4)]
    score = {
        frozenset(s): mrmr_oracle(s, cols, d.labels.tolist())
        for r in range(1, 5)
        for s in itertools.combinations(range(4), r)
    }
    assert max(score, key=score.get) == frozenset({0})
    # whale 0 = {0,1,2}; the others give dif = {1,2} in one of the draw orders
    pop = [whale_from_features(s, 4) for s in ({0, 1, 2}, {1, 2, 3}, {3})]
    for seed in range(20):
        out = local_search(pop, d, np.random.default_rng(seed))
        new = out[0].feature_set()
        if new != pop[0].feature_set():
            assert score[new] > score[frozenset({0, 1, 2})]
            if new == frozenset({0}):
                break
    else:
        pytest.fail("noise features never dropped")


@given(st.integers(0, 2**32))
def test_local_search_never_worsens(seed):
    d = _discretized(seed=seed % 7)
    rng = np.random.default_rng(seed)
    pop = [whale_from_features(set(np.flatnonzero(rng.random(8) < 0.5)) | {int(rng.integers(8))}, 8) for _ in range(6)]
    stats = {}
    out = local_search(pop, d, rng, stats)
    for before, after in zip(pop, out):
        assert after.bitmask.any()
        sb, sa = mrmr_fitness(before.feature_set(), d), mrmr_fitness(after.feature_set(), d)
        if after is before:
            continue
        assert sa > sb
        assert after.fitness is None
        assert set(after.position.tolist()) <= {-1.0, 1.0}


def test_local_search_needs_three():
    pop = [whale_from_features({0}, 8), whale_from_features({1}, 8)]
    assert local_search(pop, _discretized(), np.random.default_rng(0)) == pop
