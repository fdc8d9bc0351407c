import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_graph, cut_by_hand, enumerate_opt, star_graph
from submodmax import (
    PrefixMark,
    ValueOracle,
    brute_force_opt,
    distribute,
    gen_er,
    gen_revmax_params,
    maxcut_oracle,
    parallel_interlace_greedy,
    parallel_interpolated_greedy,
    pig,
    prefix_selection,
    revmax_oracle,
    select_subset,
    update,
)
from submodmax.oracle import OracleError, SetFunction
from submodmax.parallel import ProofConditionWarning, best_prefix, pitg_k_condition
from submodmax.verify import group_coverage, pig_structure_problems, prefix_progress_failures

T, N, F = PrefixMark.TRUE, PrefixMark.NONE, PrefixMark.FALSE


def modular(weights):
    return ValueOracle(SetFunction(len(weights), lambda s: sum(weights[i] for i in s)))


def test_update_all_pass():
    V, tau = update(modular([2.0, 3.0]), [0, 1], 1.0, 0.5, 0.01)
    assert (V, tau) == ([0, 1], 1.0)


def test_update_descends():
    f = modular([0.3])
    V, tau = update(f, [0], 1.0, 0.5, 0.01)
    assert (V, tau) == ([0], 0.25)
    assert f.ledger.rounds == 3


def test_update_hits_floor():
    taus = [1.0]
    while taus[-1] >= 0.1:
        taus.append(taus[-1] * 0.5)
    V, tau = update(modular([0.0, 0.0]), [0, 1], 1.0, 0.5, 0.1)
    assert V == [] and tau == taus[-1] < 0.1


def test_update_domain():
    with pytest.raises(OracleError):
        update(modular([1.0]), [0], 1.0, 1.0, 0.1)
    with pytest.raises(OracleError):
        update(modular([1.0]), [0], 0.0, 0.5, 0.1)


def test_distribute_examples():
    a, b = distribute([[1, 2, 3, 4], [5, 6, 7, 8]], seed=0)
    assert len(a) == len(b) == 2 and set(a) <= {1, 2, 3, 4} and set(b) <= {5, 6, 7, 8}
    a, b = distribute([[1, 2, 3, 4], [1, 2, 3, 4]], seed=1)
    assert len(a) == len(b) == 2 and not set(a) & set(b)
    out = distribute([list(range(6)), list(range(3, 9)), list(range(6, 12))], seed=2)
    assert [len(x) for x in out] == [2, 2, 2]


def test_distribute_small_first():
    # the smaller set picks first, so it always gets its full share
    for seed in range(50):
        big, small = distribute([list(range(10)), [0, 1, 2, 3]], seed=seed)
        assert len(small) == 2 and len(big) == 5


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.data())
def test_distribute_disjoint_subsets(ell, data):
    sets = [data.draw(st.lists(st.integers(0, 40), unique=True, max_size=40)) for _ in range(ell)]
    out = distribute(sets, seed=data.draw(st.integers(0, 2**31)))
    seen = set()
    for V, picked in zip(sets, out):
        assert set(picked) <= set(V)
        assert not seen & set(picked)
        seen |= set(picked)


def test_best_prefix():
    assert best_prefix([T, N, T], 0.0) == 1
    assert best_prefix([T, T, T], 0.0) == 3
    assert best_prefix([N, N], 0.5) == 0
    assert best_prefix([], 0.1) == 0
    assert best_prefix([T, F, T, T], 0.25) == 4


def test_prefix_selection_all_true():
    f = modular([1.0] * 6)
    i_star, marks, order = prefix_selection(f, range(6), 4, 1.0, 0.1, seed=0)
    assert i_star == 4 and marks == [T] * 4 and sorted(order) == list(range(6))
    i_star, marks, _ = prefix_selection(modular([1.0] * 6), range(6), 10, 1.0, 0.1, seed=0)
    assert i_star == 6 and len(marks) == 6


def test_prefix_selection_one_round_and_deterministic():
    f = maxcut_oracle(gen_er(30, 0.3, 1))
    a = prefix_selection(f, range(30), 12, 1.0, 0.2, seed=9)
    assert f.ledger.rounds == 1
    assert a == prefix_selection(f, range(30), 12, 1.0, 0.2, seed=9)
    with pytest.raises(OracleError):
        prefix_selection(f, range(30), 0, 1.0, 0.2, seed=9)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 20), st.sampled_from([0.0, 0.1, 0.3]))
def test_prefix_quality(seed, s, eps):
    f = maxcut_oracle(gen_er(20, 0.3, seed))
    i_star, marks, _ = prefix_selection(f, range(20), s, 1.0, eps, seed=seed)
    assert sum(m is T for m in marks[:i_star]) >= (1 - eps) * i_star


def test_select_subset_examples():
    order = ["a", "b", "c", "d"]
    assert select_subset(order, 3, 3, [T, N, F, T]) == (["a", "b", "c"], ["a", "b"])
    picked, kept = select_subset(order, 4, 3, [T, F, T, N])
    assert picked == ["a", "c", "d"] and kept == ["a", "c", "d"]
    assert select_subset(["a", "b"], 2, 2, [F, F]) == (["a", "b"], [])
    with pytest.raises(OracleError):
        select_subset(order, 2, 3, [T, T, T, T])


def test_pig_k3_single_additions(k3):
    M = 2.0
    res = parallel_interlace_greedy(k3, 1, 2, 0.1 * M, 0.1, seed=0)
    a, b = res.filtered
    assert len(a) == len(b) == 1 and a.as_tuple() != b.as_tuple()
    assert max(k3.evaluate(a), k3.evaluate(b)) == 2.0


def test_pig_k4_majority(k4):
    hits = sum(pig(complete_graph_oracle(4), 2, 0.1, seed=s).value == 4.0 for s in range(21))
    assert brute_force_opt(k4, 2)[1] == 4.0
    assert hits > 10


def complete_graph_oracle(n):
    return maxcut_oracle(complete_graph(n))


def test_pig_domain(k3):
    with pytest.raises(OracleError):
        parallel_interlace_greedy(k3, 0, 2, 0.1, 0.1)
    with pytest.raises(OracleError):
        parallel_interlace_greedy(k3, 1, 1, 0.1, 0.1)
    with pytest.raises(OracleError):
        parallel_interlace_greedy(k3, 1, 2, 0.0, 0.1)
    with pytest.raises(OracleError):
        pig(k3, 1, 1.0, seed=0)


def _check_log(f, log, ell):
    g = f.unledgered()
    for entry in log:
        if entry["kind"] == "iteration":
            assert len(set(entry["sizes"].values())) <= 1
        elif entry["kind"] == "block":
            base = set(entry["base"])
            prefix = entry["prefix"]
            for i, (x, mark, gain) in enumerate(zip(prefix, entry["marks"], entry["gains"])):
                assert g.marginal_gain(x, base | set(prefix[:i])) == pytest.approx(gain, abs=1e-9)
                if mark is T:
                    assert gain >= entry["tau"]
                elif mark is F:
                    assert gain < 0
            assert set(entry["kept"]) <= set(entry["picked"])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 8), st.sampled_from([0.1, 0.2, 0.4]), st.booleans())
def test_pig_invariants(seed, k, eps, use_revmax):
    g = gen_er(30, 0.3, seed)
    f = revmax_oracle(g, gen_revmax_params(g, seed)) if use_revmax else maxcut_oracle(g)
    log = []
    rec = pig(f, k, eps, seed=seed, log=log)
    assert pig_structure_problems(f, rec) == []
    _check_log(f, log, 2)
    assert len(rec.solution) <= k
    assert rec.value == pytest.approx(f.unledgered().evaluate(rec.solution), abs=1e-9)


def test_pig_block_path_runs_and_replays():
    f = maxcut_oracle(gen_er(400, 0.02, 3))
    log = []
    rec = pig(f, 40, 0.2, seed=5, log=log)
    assert any(e["kind"] == "block" for e in log)
    _check_log(f, log, 2)
    assert pig_structure_problems(f, rec) == []


def test_pig_low_rounds(er_oracle):
    # sequential greedy needs 2k rounds; measured PIG rounds sit near k / 2
    for seed in range(3):
        assert pig(er_oracle(1000), 100, 0.1, seed=seed).rounds <= 60


def test_pig_deterministic(er_oracle):
    assert pig(er_oracle(300), 20, 0.1, seed=4) == pig(er_oracle(300), 20, 0.1, seed=4)


def test_pitg_basic(er_oracle):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProofConditionWarning)
        a = parallel_interpolated_greedy(er_oracle(200), 12, 3, 0.2, seed=6)
        b = parallel_interpolated_greedy(er_oracle(200), 12, 3, 0.2, seed=6)
    assert a == b
    assert len(a.solution) <= 12 and all(x < 200 for x in a.solution)
    assert pig_structure_problems(er_oracle(200), a) == []


def test_pitg_warns_outside_proven_regime(k4):
    assert not pitg_k_condition(4, 2, 0.2)
    with pytest.warns(ProofConditionWarning):
        parallel_interpolated_greedy(k4, 4, 2, 0.2, seed=0)
    # e * 0.5 * 5 - 4 > 0 and k large enough
    assert pitg_k_condition(10, 5, 0.5)


def test_pitg_domain(k3):
    with pytest.raises(OracleError):
        parallel_interpolated_greedy(k3, 2, 3, 0.2, seed=0)


def test_pitg_star_empirical_floor():
    g = star_graph(9)
    opt = enumerate_opt(lambda s: cut_by_hand(g.edges(), s), 10, 4)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProofConditionWarning)
        values = [parallel_interpolated_greedy(maxcut_oracle(g), 4, 2, 0.2, seed=s).value for s in range(500)]
    se = np.std(values) / math.sqrt(500)
    assert np.mean(values) >= 0.25 * opt - 3 * se


def test_prefix_selection_progress_bound():
    # second pick lands in the first pick's block with probability 6/39, the only failure
    f = ValueOracle(group_coverage(40, 7))
    freq = prefix_progress_failures(f, s=2, tau=1.0, eps=0.4, trials=1000, seed=3)
    expected = 6 / 39
    assert abs(freq - expected) < 4 * math.sqrt(expected * (1 - expected) / 1000)
    assert freq <= 0.6
