"""RandomGreedy and its subsampled FastRandomGreedy configuration."""

from __future__ import annotations

import math

import numpy as np

from .greedy import RunRecord, _Run, check_k
from .oracle import ElementId, OracleError, SolutionSet, ValueOracle


def _top_k_pick(f: ValueOracle, S: SolutionSet, cands: list, free_dummies: list, k: int,
                rng: np.random.Generator) -> tuple[ElementId, float]:
    f.ledger.mark_round()
    gains = f.gains(cands, S)
    scored = [(-g, x) for x, g in zip(cands, gains)]
    scored.extend((-0.0, d) for d in free_dummies[:k])
    scored.sort()
    top = scored[:k]
    neg_g, x = top[int(rng.integers(len(top)))]
    return x, -neg_g


def random_greedy(oracle: ValueOracle, k: int, seed: int) -> RunRecord:
    """Each step adds a uniform pick among the k largest marginals (k dummies pad the ground set)."""
    check_k(oracle, k)
    run = _Run(oracle)
    f = oracle.with_dummies(k)
    rng = np.random.default_rng(seed)
    S = SolutionSet()
    value = f.evaluate(())
    free = list(f.dummy_ids())
    for _ in range(k):
        cands = [x for x in f.ground if x not in S]
        x, g = _top_k_pick(f, S, cands, free, k, rng)
        S.add(x)
        if f.is_dummy(x):
            free.remove(x)
        value += g
    return run.record(S, value, seed=seed, n=f.n)


def sample_probability(k: int, eps: float, eps_power: int = 1) -> float:
    """p = 8 k^-1 eps^-eps_power ln(2 / eps).

    The default power 1 reproduces the sample sizes reported for the
    experiments; pass 2 for the stricter form of the same rule.
    """
    return 8.0 / k / eps ** eps_power * math.log(2.0 / eps)


def fast_random_greedy(oracle: ValueOracle, k: int, eps: float, seed: int, eps_power: int = 1) -> RunRecord:
    """Greedy over a fresh Bernoulli(p) sample per step; plain RandomGreedy when p >= 1."""
    check_k(oracle, k)
    if not 0.0 < eps < 1.0:
        raise OracleError(f"eps={eps} outside (0, 1)")
    p = sample_probability(k, eps, eps_power)
    if p >= 1.0:
        return random_greedy(oracle, k, seed)
    run = _Run(oracle)
    f = oracle.with_dummies(k)
    rng = np.random.default_rng(seed)
    S = SolutionSet()
    value = f.evaluate(())
    next_dummy = f.n
    for _ in range(k):
        rest = np.array([x for x in f.ground if x not in S], dtype=np.int64)
        sample = rest[rng.random(len(rest)) < p].tolist()
        f.ledger.mark_round()
        best, best_gain = None, 0.0
        for x, g in zip(sample, f.gains(sample, S)):
            if g > best_gain or (best is None and g >= 0.0):
                best, best_gain = x, g
        if best is None:
            best, best_gain = next_dummy, 0.0
            next_dummy += 1
        S.add(best)
        value += best_gain
    return run.record(S, value, seed=seed, n=f.n, p=p)
