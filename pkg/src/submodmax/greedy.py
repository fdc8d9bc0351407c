"""Quadratic-query interlaced greedy algorithms (deterministic 1/4, randomized 1/e)."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .oracle import ElementId, OracleError, SolutionSet, ValueOracle


@dataclass
class RunRecord:
    solution: tuple[ElementId, ...]
    value: float
    queries: int
    rounds: int
    seed: int = 0
    wall_ms: float = field(default=0.0, compare=False)
    info: dict = field(default_factory=dict, compare=False, repr=False)

    def row(self) -> tuple:
        """Everything except timing; equal rows mean a reproduced run."""
        return (self.solution, repr(self.value), self.queries, self.rounds, self.seed)


class _Run:
    """Collects ledger deltas and wall time for one algorithm execution."""

    def __init__(self, oracle: ValueOracle):
        self.ledger = oracle.ledger
        self.q0, self.r0 = oracle.ledger.snapshot()
        self.t0 = time.perf_counter()

    def record(self, solution: Iterable[ElementId], value: float, seed: int = 0, n: int | None = None,
               **info) -> RunRecord:
        sol = tuple(x for x in solution if n is None or x < n)
        return RunRecord(
            solution=sol,
            value=float(value),
            queries=self.ledger.queries - self.q0,
            rounds=self.ledger.rounds - self.r0,
            seed=seed,
            wall_ms=(time.perf_counter() - self.t0) * 1000.0,
            info=info,
        )


def check_k(oracle: ValueOracle, k: int) -> None:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise OracleError(f"k must be an integer, got {k!r}")
    if k < 1 or k > oracle.ground_size:
        raise OracleError(f"k={k} outside 1..{oracle.ground_size}")


class _DummyPool:
    """Hands out the lowest unused dummy id."""

    def __init__(self, ids: range):
        self._next = ids.start
        self._stop = ids.stop

    def take(self) -> ElementId:
        if self._next >= self._stop:
            raise OracleError("dummy elements exhausted")
        x = self._next
        self._next += 1
        return x


def greedy_pick(f: ValueOracle, members, candidates: Sequence[ElementId], dummies: _DummyPool):
    """argmax of the marginal over ``candidates`` plus the free dummies.

    One adaptive round.  Ties go to the lowest id, so a real element with
    zero gain beats a dummy; a dummy is used only when every real candidate
    has negative gain (or none is left).
    """
    f.ledger.mark_round()
    best, best_gain = None, 0.0
    for x, g in zip(candidates, f.gains(candidates, members)):
        if g > best_gain or (best is None and g >= 0.0):
            best, best_gain = x, g
    if best is None:
        return dummies.take(), 0.0
    return best, best_gain


def interlace_greedy(oracle: ValueOracle, k: int, trace: list | None = None) -> RunRecord:
    """Grow two disjoint solutions A, B by alternating greedy steps; return the better.

    Pads the ground set with 2k dummies so every step has a non-negative
    choice.  Exactly 2k adaptive rounds and at most 2kn marginal queries.
    """
    check_k(oracle, k)
    run = _Run(oracle)
    f = oracle.with_dummies(2 * k)
    pool = _DummyPool(f.dummy_ids())
    A, B = SolutionSet(), SolutionSet()
    taken: set[ElementId] = set()
    f_empty = f.evaluate(())
    f_a = f_b = f_empty
    for _ in range(k):
        cands = [x for x in f.ground if x not in taken]
        a, g = greedy_pick(f, A, cands, pool)
        A.add(a)
        taken.add(a)
        f_a += g
        cands = [x for x in f.ground if x not in taken]
        b, g = greedy_pick(f, B, cands, pool)
        B.add(b)
        taken.add(b)
        f_b += g
        if trace is not None:
            trace.append((A.as_tuple(), B.as_tuple(), f_a, f_b))
    best, value = (A, f_a) if f_a >= f_b else (B, f_b)
    return run.record(best, value, n=f.n, candidates=(A.as_tuple(), B.as_tuple()))


def interpolated_greedy(oracle: ValueOracle, k: int, ell: int, seed: int,
                        trace: list | None = None) -> RunRecord:
    """ell rounds of interlacing ell greedy solutions from a shared pool.

    Each outer round clones the current G into ell solutions, grows each by
    m = k // ell greedy picks (round robin, elements leave the pool once
    claimed and never return), then keeps one solution chosen uniformly at
    random.  Returns |G| = ell * m <= k elements before dummy stripping.
    """
    check_k(oracle, k)
    if ell < 1 or ell > k:
        raise OracleError(f"ell={ell} must satisfy 1 <= ell <= k={k}")
    run = _Run(oracle)
    m = k // ell
    # The pool never refills, so keep enough dummies for all ell * ell * m picks.
    f = oracle.with_dummies(max(2 * k, ell * ell * m))
    pool = _DummyPool(f.dummy_ids())
    rng = np.random.default_rng(seed)
    claimed: set[ElementId] = set()
    G = SolutionSet()
    f_g = f.evaluate(())
    for _ in range(ell):
        keep = int(rng.integers(ell))
        sols = [G.copy() for _ in range(ell)]
        vals = [f_g] * ell
        new_elems: list[list[ElementId]] = [[] for _ in range(ell)]
        for _ in range(m):
            for l in range(ell):
                cands = [x for x in f.ground if x not in claimed]
                x, g = greedy_pick(f, sols[l], cands, pool)
                sols[l].add(x)
                claimed.add(x)
                vals[l] += g
                new_elems[l].append(x)
        if trace is not None:
            trace.append({"base": G.as_tuple(), "added": [tuple(e) for e in new_elems], "keep": keep})
        G, f_g = sols[keep], vals[keep]
    return run.record(G, f_g, seed=seed, n=f.n)
