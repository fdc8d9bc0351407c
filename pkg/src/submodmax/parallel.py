"""Low-adaptivity interlaced greedy: PIG, PItG and their subroutines.

Adaptive rounds are charged per batch of independent queries: one per
candidate filter pass in :func:`update`, one per :func:`prefix_selection`,
one for the max-singleton scan.  Batches issued for different solutions in
the same step are wrapped in ``ledger.parallel()`` so they cost the maximum
of their branch rounds, not the sum.

All random draws come from a single ``numpy.random.Generator`` and happen
before the query batch they steer, in this order per while-iteration:
sequential branch -- one pick per active solution, in index order;
block branch -- Distribute's samples (ascending |V_j|), then one
permutation per active solution in index order.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .greedy import RunRecord, _Run, check_k
from .oracle import ElementId, OracleError, SolutionSet, ValueOracle, _Joined, contract


class PrefixMark(enum.Enum):
    TRUE = "true"
    NONE = "none"
    FALSE = "false"


class ProofConditionWarning(UserWarning):
    """Parameters fall outside the range where the approximation bound is proven."""


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# --------------------------------------------------------------------------
# Update
# --------------------------------------------------------------------------

def _filter_pass(f: ValueOracle, members, cands: list, tau: float) -> list:
    if not cands:
        return []
    f.ledger.mark_round()
    return [x for x, g in zip(cands, f.gains(cands, members)) if g >= tau]


def _update(f: ValueOracle, members, universe: Sequence[ElementId], excluded, V: Sequence[ElementId],
            tau: float, eps: float, tau_min: float) -> tuple[list, float]:
    V = _filter_pass(f, members, [x for x in V if x not in excluded], tau)
    while not V:
        tau *= 1.0 - eps
        if tau < tau_min:
            return [], tau
        V = _filter_pass(f, members, [x for x in universe if x not in excluded], tau)
    return V, tau


def update(oracle: ValueOracle, V, tau: float, eps: float, tau_min: float) -> tuple[list, float]:
    """Keep the candidates whose singleton gain under ``oracle`` clears ``tau``.

    If none survive, lower ``tau`` geometrically and refilter the oracle's
    whole ground set.  Gives up with an empty set as soon as ``tau`` drops
    below ``tau_min``.
    """
    if not 0.0 < eps < 1.0:
        raise OracleError(f"eps={eps} outside (0, 1)")
    if tau <= 0.0:
        raise OracleError("tau must be positive")
    universe = list(oracle.ground)
    allowed = set(universe)
    V = [x for x in sorted(V) if x in allowed]
    return _update(oracle, (), universe, (), V, tau, eps, tau_min)


# --------------------------------------------------------------------------
# Distribute
# --------------------------------------------------------------------------

def distribute(sets: Sequence, seed=None) -> list[list[ElementId]]:
    """Pairwise-disjoint random subsets, |out[j]| = floor(|sets[j]| / ell).

    Smaller inputs pick first (ties by position); each samples without
    replacement from what earlier picks left over.
    """
    rng = _rng(seed)
    ell = len(sets)
    if ell < 1:
        raise OracleError("distribute needs at least one set")
    out: list[list[ElementId]] = [[] for _ in range(ell)]
    claimed: set[ElementId] = set()
    for j in sorted(range(ell), key=lambda j: (len(sets[j]), j)):
        avail = sorted(x for x in set(sets[j]) if x not in claimed)
        want = min(len(sets[j]) // ell, len(avail))
        if want:
            picks = rng.choice(len(avail), size=want, replace=False)
            out[j] = [avail[i] for i in picks]
            claimed.update(out[j])
    return out


# --------------------------------------------------------------------------
# Prefix-Selection
# --------------------------------------------------------------------------

def best_prefix(marks: Sequence[PrefixMark], eps: float) -> int:
    """Largest i with at least (1 - eps) * i TRUE marks among the first i (0 if none)."""
    best = 0
    trues = 0
    for i, mark in enumerate(marks, 1):
        if mark is PrefixMark.TRUE:
            trues += 1
        if trues >= (1.0 - eps) * i:
            best = i
    return best


def _prefix_marks(f: ValueOracle, members, perm: Sequence[ElementId], s: int,
                  tau: float) -> tuple[list[PrefixMark], list[float]]:
    length = min(s, len(perm))
    marks: list[PrefixMark] = []
    gains: list[float] = []
    if length == 0:
        return marks, gains
    f.ledger.mark_round()
    prefix: set[ElementId] = set()
    view = _Joined(members, prefix)
    for i in range(length):
        v = perm[i]
        g = f.gain(v, view)
        gains.append(g)
        if g >= tau:
            marks.append(PrefixMark.TRUE)
        elif g < 0.0:
            marks.append(PrefixMark.FALSE)
        else:
            marks.append(PrefixMark.NONE)
        prefix.add(v)
    return marks, gains


def prefix_selection(oracle: ValueOracle, candidates, s: int, tau: float, eps: float,
                     seed=None) -> tuple[int, list[PrefixMark], list[ElementId]]:
    """Randomly order ``candidates`` and mark every prefix marginal in one round.

    Returns ``(i_star, marks, order)``; ``marks[i]`` judges ``order[i]``
    against ``order[:i]``.  ``s`` larger than the candidate count is clamped.
    """
    if s < 1:
        raise OracleError("s must be >= 1")
    rng = _rng(seed)
    cands = sorted(candidates)
    order = [cands[i] for i in rng.permutation(len(cands))]
    marks, _ = _prefix_marks(oracle, (), order, s, tau)
    return best_prefix(marks, eps), marks, order


def select_subset(order: Sequence[ElementId], i_star_j: int, i_star: int,
                  marks: Sequence[PrefixMark]) -> tuple[list[ElementId], list[ElementId]]:
    """Pick ``i_star`` of the first ``i_star_j`` elements: TRUE first, then NONE, then FALSE.

    Returns the picks in their original order, and the same picks without
    the FALSE-marked ones.
    """
    if not 0 <= i_star <= i_star_j <= len(order):
        raise OracleError(f"need 0 <= i*={i_star} <= i*_j={i_star_j} <= {len(order)}")
    chosen: list[int] = []
    for wanted in (PrefixMark.TRUE, PrefixMark.NONE, PrefixMark.FALSE):
        for i in range(i_star_j):
            if len(chosen) == i_star:
                break
            if marks[i] is wanted:
                chosen.append(i)
    assert len(chosen) == i_star, "prefix window too short for the requested block"
    chosen.sort()
    picked = [order[i] for i in chosen]
    kept = [order[i] for i in chosen if marks[i] is not PrefixMark.FALSE]
    return picked, kept


# --------------------------------------------------------------------------
# ParallelInterlaceGreedy
# --------------------------------------------------------------------------

@dataclass
class PigResult:
    full: list[SolutionSet]
    filtered: list[SolutionSet]
    taus: list[float]
    M: float
    log: list = field(default_factory=list)


def parallel_interlace_greedy(oracle: ValueOracle, m: int, ell: int, tau_min: float, eps: float,
                              seed=None, *, M: float | None = None, log: list | None = None) -> PigResult:
    """Grow ``ell`` disjoint solutions of up to ``m`` elements in few adaptive rounds.

    ``seed`` may be an int or a shared ``numpy.random.Generator``.  ``M``
    skips the max-singleton round when the caller already knows it.  When
    ``log`` is a list it receives one dict per sequential pick, prefix
    block and while-iteration, enough to replay every acceptance.
    """
    if m < 1:
        raise OracleError("m must be >= 1")
    if ell < 2:
        raise OracleError("ell must be >= 2")
    if not 0.0 < eps < 1.0:
        raise OracleError(f"eps={eps} outside (0, 1)")
    if not tau_min > 0.0:
        raise OracleError("tau_min must be positive")
    rng = _rng(seed)
    f = oracle
    ledger = f.ledger
    universe = list(f.ground)
    if M is None:
        ledger.mark_round()
        M = max(f.gains(universe, ()), default=0.0)

    A = [SolutionSet() for _ in range(ell)]
    A_kept = [SolutionSet() for _ in range(ell)]
    tau = [M] * ell
    if M < tau_min:
        return PigResult(A, A_kept, tau, M, log if log is not None else [])
    V: list[list[ElementId]] = [list(universe) for _ in range(ell)]
    claimed: set[ElementId] = set()
    active = list(range(ell))
    budget = m

    while active and budget > 0:
        with ledger.parallel() as par:
            for j in active:
                with par.branch():
                    V[j], tau[j] = _update(f, A[j], universe, claimed, V[j], tau[j], eps, tau_min)
        active = [j for j in active if tau[j] >= tau_min]
        if not active:
            break

        if any(len(V[j]) < 2 * ell for j in active):
            # one element per solution, in turn
            for j in list(active):
                if not V[j]:
                    V[j], tau[j] = _update(f, A[j], universe, claimed, V[j], tau[j], eps, tau_min)
                if tau[j] < tau_min:
                    active.remove(j)
                    continue
                x = V[j][int(rng.integers(len(V[j])))]
                if log is not None:
                    log.append({"kind": "single", "l": j, "base": A[j].as_tuple(), "x": x, "tau": tau[j]})
                A[j].add(x)
                A_kept[j].add(x)
                claimed.add(x)
                for l in range(ell):
                    if x in V[l]:
                        V[l] = [y for y in V[l] if y != x]
            budget -= 1
        else:
            # equal-size blocks, one per solution
            pools = distribute([V[j] for j in active], rng)
            s = min(budget, min(len(p) for p in pools))
            orders = [[p[i] for i in rng.permutation(len(p))] for p in pools]
            results = []
            with ledger.parallel() as par:
                for j, order in zip(active, orders):
                    with par.branch():
                        marks, gains = _prefix_marks(f, A[j], order, s, tau[j])
                    results.append((best_prefix(marks, eps), marks, gains))
            i_star = min(r[0] for r in results)
            for j, order, (i_star_j, marks, gains) in zip(active, orders, results):
                picked, kept = select_subset(order, i_star_j, i_star, marks)
                if log is not None:
                    log.append({"kind": "block", "l": j, "base": A[j].as_tuple(),
                                "prefix": tuple(order[:len(marks)]), "marks": tuple(marks),
                                "gains": tuple(gains), "tau": tau[j], "picked": tuple(picked),
                                "kept": tuple(kept)})
                A[j].extend(picked)
                A_kept[j].extend(kept)
                claimed.update(picked)
            budget -= i_star
        if log is not None:
            log.append({"kind": "iteration", "sizes": {j: len(A[j]) for j in active},
                        "budget": budget})

    return PigResult(A, A_kept, tau, M, log if log is not None else [])


def pig(oracle: ValueOracle, k: int, eps: float, seed: int, log: list | None = None) -> RunRecord:
    """Two interlaced solutions via PIG; returns the better filtered solution."""
    check_k(oracle, k)
    if not 0.0 < eps < 1.0:
        raise OracleError(f"eps={eps} outside (0, 1)")
    run = _Run(oracle)
    f = oracle
    rng = np.random.default_rng(seed)
    f.ledger.mark_round()
    M = max(f.gains(f.ground, ()), default=0.0)
    if M <= 0.0:
        return run.record((), f.evaluate(()), seed=seed, n=f.n, M=M, full=((), ()), filtered=((), ()))
    res = parallel_interlace_greedy(f, k, 2, eps * M / k, eps, rng, M=M, log=log)
    f.ledger.mark_round()
    values = [f.evaluate(s) for s in res.filtered]
    best = 0 if values[0] >= values[1] else 1
    return run.record(res.filtered[best], values[best], seed=seed, n=f.n, M=M,
                      full=tuple(s.as_tuple() for s in res.full),
                      filtered=tuple(s.as_tuple() for s in res.filtered),
                      values=tuple(values))


def pitg_k_condition(k: int, ell: int, eps: float) -> bool:
    """Whether k meets the size condition under which PItG's bound is proven."""
    denom = math.e * eps * ell - 4.0
    return denom > 0 and k >= (2.0 - eps) ** 2 * ell / denom


def parallel_interpolated_greedy(oracle: ValueOracle, k: int, ell: int, eps: float, seed: int,
                                 log: list | None = None) -> RunRecord:
    """ell rounds of PIG on f contracted to the current G; G absorbs one random filtered solution."""
    check_k(oracle, k)
    if ell < 2 or ell > k:
        raise OracleError(f"ell={ell} must satisfy 2 <= ell <= k={k}")
    if not 0.0 < eps < 1.0:
        raise OracleError(f"eps={eps} outside (0, 1)")
    if not pitg_k_condition(k, ell, eps):
        warnings.warn(f"k={k}, ell={ell}, eps={eps} outside the proven regime of PItG",
                      ProofConditionWarning, stacklevel=2)
    run = _Run(oracle)
    f = oracle
    rng = np.random.default_rng(seed)
    eps2 = eps / 2.0
    m = k // ell
    f.ledger.mark_round()
    M = max(f.gains(f.ground, ()), default=0.0)
    if M <= 0.0:
        return run.record((), f.evaluate(()), seed=seed, n=f.n, M=M)
    tau_min = eps2 * M / k
    G = SolutionSet()
    history = []
    for _ in range(ell):
        keep = int(rng.integers(ell))
        g = contract(f, G)
        res = parallel_interlace_greedy(g, m, ell, tau_min, eps2, rng, log=log)
        history.append({"base": G.as_tuple(), "filtered": [s.as_tuple() for s in res.filtered],
                        "full": [s.as_tuple() for s in res.full], "keep": keep})
        G.extend(res.filtered[keep])
    f.ledger.mark_round()
    value = f.evaluate(G)
    return run.record(G, value, seed=seed, n=f.n, M=M, history=history)
