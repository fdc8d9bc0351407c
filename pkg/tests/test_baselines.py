import math

import numpy as np
import pytest

from submodmax import brute_force_opt, fast_random_greedy, gen_er, gen_revmax_params, random_greedy, revmax_oracle
from submodmax.baselines import sample_probability
from submodmax.oracle import OracleError


def test_random_greedy_k3(k3):
    for seed in range(10):
        assert random_greedy(k3, 1, seed).value == 2.0


def test_random_greedy_deterministic(er_oracle):
    assert random_greedy(er_oracle(200), 15, 3) == random_greedy(er_oracle(200), 15, 3)


def test_random_greedy_accounting(er_oracle):
    rec = random_greedy(er_oracle(120), 9, 1)
    assert rec.rounds == 9
    assert rec.queries <= 9 * 120 + 120
    assert len(rec.solution) <= 9 and all(x < 120 for x in rec.solution)


def test_random_greedy_domain(k3):
    with pytest.raises(OracleError):
        random_greedy(k3, 4, 0)


def test_sample_probability_values():
    # 8 / k * eps^-1 * ln(2 / eps)
    assert sample_probability(4, 0.1) == pytest.approx(8 / 4 * 10 * math.log(20))
    assert sample_probability(4, 0.1) == pytest.approx(59.9, abs=0.05)
    assert sample_probability(4000, 0.1) == pytest.approx(0.0599, abs=5e-5)
    assert sample_probability(4000, 0.1) * 1e5 == pytest.approx(5991, abs=1)
    assert sample_probability(4, 0.1, eps_power=2) == pytest.approx(599.1, abs=0.05)


def test_fast_random_greedy_delegates_when_p_large(er_oracle):
    a = fast_random_greedy(er_oracle(100), 4, 0.1, seed=7)
    b = random_greedy(er_oracle(100), 4, seed=7)
    assert a == b and a.row() == b.row()


def test_fast_random_greedy_sampling_path():
    n = 1000
    g = gen_er(n, 5 / n, 2)
    f = revmax_oracle(g, gen_revmax_params(g, 2))
    k, eps = 600, 0.4
    p = sample_probability(k, eps)
    assert p < 1
    rec = fast_random_greedy(f, k, eps, seed=4)
    assert rec.info["p"] == p
    assert rec.rounds == k
    # step i samples from between n - i and n remaining elements (dummy picks do not shrink it)
    low, high = sum(p * (n - i) for i in range(k)), p * n * k
    assert low - 6 * math.sqrt(low) < rec.queries - 1 < high + 6 * math.sqrt(high)
    assert rec.value == pytest.approx(f.unledgered().evaluate(rec.solution), abs=1e-6)
    assert rec == fast_random_greedy(revmax_oracle(g, gen_revmax_params(g, 2)), k, eps, seed=4)


def test_fast_random_greedy_domain(k3):
    with pytest.raises(OracleError):
        fast_random_greedy(k3, 1, 1.0, seed=0)


def test_random_greedy_mean_on_revmax():
    g = gen_er(9, 0.5, 12)
    f = revmax_oracle(g, gen_revmax_params(g, 12))
    _, opt = brute_force_opt(f, 3)
    values = [random_greedy(f, 3, s).value for s in range(500)]
    assert np.mean(values) >= opt / math.e - 3 * np.std(values) / math.sqrt(500)
