import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_graph, cut_by_hand, enumerate_opt, star_graph
from submodmax import (
    brute_force_opt,
    fast_interlace_greedy,
    fast_interpolated_greedy,
    gen_er,
    gen_revmax_params,
    maxcut_oracle,
    revmax_oracle,
)
from submodmax.oracle import OracleError
from submodmax.threshold import default_ell


def _replay(oracle, members, accepted):
    """Every accepted gain cleared its threshold and matches a fresh marginal."""
    f = oracle.unledgered()
    members = list(members)
    base = len(members) - len(accepted)
    for i, (x, g, tau) in enumerate(accepted):
        assert members[base + i] == x
        assert g >= tau
        assert f.marginal_gain(x, set(members[:base + i])) == pytest.approx(g, abs=1e-9)


def test_fast_interlace_k3(k3):
    assert fast_interlace_greedy(k3, 1, 0.1).value == 2.0


def test_fast_interlace_eps_domain(k3):
    for eps in (0.0, 0.5, 0.7):
        with pytest.raises(OracleError):
            fast_interlace_greedy(k3, 1, eps)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5), st.sampled_from([0.05, 0.1, 0.3]), st.booleans())
def test_fast_interlace_invariants(seed, k, eps, use_revmax):
    g = gen_er(12, 0.4, seed)
    f = revmax_oracle(g, gen_revmax_params(g, seed)) if use_revmax else maxcut_oracle(g)
    rec = fast_interlace_greedy(f, k, eps)
    if "candidates" not in rec.info:
        return
    A, B = rec.info["candidates"]
    assert not set(A) & set(B)
    assert len(A) <= k and len(B) <= k
    for members, accepted, taus in zip((A, B), rec.info["accepted"], rec.info["taus"]):
        assert all(b <= a for a, b in zip(taus, taus[1:]))
        _replay(f, members, accepted)
    _, opt = brute_force_opt(f, k)
    assert rec.value >= (0.25 - eps) * opt - 1e-9
    assert rec.value == pytest.approx(f.unledgered().evaluate(rec.solution), abs=1e-9)


def test_fast_interlace_query_bound(er_oracle):
    n, k, eps = 2000, 100, 0.1
    rec = fast_interlace_greedy(er_oracle(n), k, eps)
    assert rec.queries <= 2 * n * (math.log(k / eps) / eps + 1) * 2


def test_fast_interlace_doubling_n(er_oracle):
    q1 = fast_interlace_greedy(er_oracle(1000), 50, 0.1).queries
    q2 = fast_interlace_greedy(er_oracle(2000), 50, 0.1).queries
    assert q2 <= 2.2 * q1


def test_default_ell():
    # ceil(4 / (e * eps / 2))
    assert default_ell(0.8) == 4
    assert default_ell(0.6) == 5
    assert default_ell(0.1) == 30


def test_fast_interpolated_needs_k_at_least_ell(k4):
    with pytest.raises(OracleError, match="need k >= 4"):
        fast_interpolated_greedy(k4, 3, 0.8, seed=0)


def test_fast_interpolated_size_bound(k4):
    rec = fast_interpolated_greedy(k4, 4, 0.8, seed=1, ell=2)
    assert len(rec.solution) <= 4
    rec = fast_interpolated_greedy(k4, 4, 0.8, seed=1)
    assert rec.info["ell"] == 4 and len(rec.solution) <= 4


def test_fast_interpolated_deterministic(er_oracle):
    a = fast_interpolated_greedy(er_oracle(300), 12, 0.5, seed=8, ell=3)
    b = fast_interpolated_greedy(er_oracle(300), 12, 0.5, seed=8, ell=3)
    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6), st.integers(0, 1000))
def test_fast_interpolated_invariants(graph_seed, k, seed):
    g = gen_er(12, 0.4, graph_seed)
    f = revmax_oracle(g, gen_revmax_params(g, graph_seed))
    rec = fast_interpolated_greedy(f, k, 0.6, seed=seed, ell=2)
    for step in rec.info["history"]:
        added = [set(a) for a in step["added"]]
        assert not added[0] & added[1]
        assert not (added[0] | added[1]) & set(step["base"])
        for extra, accepted in zip(step["added"], step["accepted"]):
            _replay(f, step["base"] + extra, accepted)
    assert len(rec.solution) <= k
    assert rec.value == pytest.approx(f.unledgered().evaluate(rec.solution), abs=1e-9)


def test_fast_interpolated_star_empirical_floor():
    g = star_graph(9)
    opt = enumerate_opt(lambda s: cut_by_hand(g.edges(), s), 10, 4)
    assert opt == 9.0
    values = [fast_interpolated_greedy(maxcut_oracle(g), 4, 0.6, seed=s, ell=3).value for s in range(500)]
    assert np.mean(values) >= 0.25 * opt


def test_nonpositive_singletons_return_empty():
    # every vertex isolated: all marginals are 0
    f = maxcut_oracle(gen_er(5, 0.0, 0))
    assert fast_interlace_greedy(f, 2, 0.1).solution == ()
    assert fast_interpolated_greedy(f, 2, 0.5, seed=0, ell=2).solution == ()
    assert maxcut_oracle(complete_graph(3)).evaluate(()) == 0.0
