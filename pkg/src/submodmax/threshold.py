"""Descending-threshold versions of the interlaced greedy algorithms.

Both algorithms replace each argmax by "take the first element (lowest id)
whose marginal clears the current threshold, otherwise shrink the threshold
by (1 - eps)".  A per-solution cursor resumes the ascending scan where the
last one stopped: by submodularity an element that missed tau keeps missing
it while the solution grows, so the accepted element is the same as with a
fresh scan and each threshold level costs at most n queries.
"""

from __future__ import annotations

import math

import numpy as np

from .greedy import RunRecord, _Run, check_k
from .oracle import ElementId, OracleError, SolutionSet, ValueOracle


def max_singleton(f: ValueOracle) -> tuple[float, float]:
    """(M, f(empty)) with M = max_x f({x}), one adaptive round."""
    f_empty = f.evaluate(())
    f.ledger.mark_round()
    gains = f.gains(f.ground, ())
    return f_empty + max(gains, default=0.0), f_empty


class _Descent:
    """One solution growing under its own descending threshold."""

    def __init__(self, members: SolutionSet, value: float, tau: float):
        self.members = members
        self.value = value
        self.tau = tau
        self.cursor = 0
        self.accepted: list[tuple[ElementId, float, float]] = []
        self.taus = [tau]

    def step(self, f: ValueOracle, ground, claimed: set, floor: float, eps: float, full) -> bool:
        """Run the inner while-loop once: add one element or run out. True if added."""
        while self.tau >= floor and not full(self):
            f.ledger.mark_round()
            found = None
            i = self.cursor
            n = len(ground)
            while i < n:
                x = ground[i]
                i += 1
                if x in claimed:
                    continue
                g = f.gain(x, self.members)
                if g >= self.tau:
                    found = (x, g)
                    break
            if found is not None:
                x, g = found
                self.cursor = i
                self.members.add(x)
                claimed.add(x)
                self.value += g
                self.accepted.append((x, g, self.tau))
                return True
            self.tau *= 1.0 - eps
            self.taus.append(self.tau)
            self.cursor = 0
        return False

    def exhausted(self, floor: float, full) -> bool:
        return self.tau < floor or full(self)


def fast_interlace_greedy(oracle: ValueOracle, k: int, eps: float) -> RunRecord:
    check_k(oracle, k)
    if not 0.0 < eps < 0.5:
        raise OracleError(f"eps={eps} outside (0, 1/2)")
    run = _Run(oracle)
    f = oracle
    M, f_empty = max_singleton(f)
    if M <= 0.0:
        # no singleton gains anything, so by submodularity nothing beats the empty set
        return run.record((), f_empty, n=f.n, M=M)
    floor = eps * M / k
    ground = list(f.ground)
    claimed: set[ElementId] = set()
    a = _Descent(SolutionSet(), f_empty, M)
    b = _Descent(SolutionSet(), f_empty, M)

    def full(d: _Descent) -> bool:
        return len(d.members) >= k

    for _ in range(k):
        if a.exhausted(floor, full) and b.exhausted(floor, full):
            break
        a.step(f, ground, claimed, floor, eps, full)
        b.step(f, ground, claimed, floor, eps, full)
    best = a if a.value >= b.value else b
    return run.record(best.members, best.value, n=f.n,
                      candidates=(a.members.as_tuple(), b.members.as_tuple()),
                      accepted=(a.accepted, b.accepted), taus=(a.taus, b.taus), M=M)


def default_ell(eps: float) -> int:
    """Number of interlaced solutions for the nearly-linear 1/e variant."""
    return math.ceil(4.0 / (math.e * (eps / 2.0)))


def fast_interpolated_greedy(oracle: ValueOracle, k: int, eps: float, seed: int,
                             ell: int | None = None) -> RunRecord:
    """Threshold version of interpolated greedy.

    ``ell`` defaults to ceil(4 / (e * eps / 2)); pass it explicitly to run
    with fewer solutions than the default (the guarantee then needs
    ell >= 4 / (e * eps)).
    """
    check_k(oracle, k)
    if not 0.0 < eps < 1.0:
        raise OracleError(f"eps={eps} outside (0, 1)")
    if ell is None:
        ell = default_ell(eps)
    if ell < 1:
        raise OracleError("ell must be >= 1")
    if k < ell:
        raise OracleError(f"k={k} is smaller than ell={ell}; need k >= {ell}")
    run = _Run(oracle)
    f = oracle
    eps2 = eps / 2.0
    m = k // ell
    rng = np.random.default_rng(seed)
    M, f_empty = max_singleton(f)
    if M <= 0.0:
        return run.record((), f_empty, seed=seed, n=f.n, history=[], ell=ell, M=M)
    floor = eps2 * M / k
    ground = list(f.ground)
    G = SolutionSet()
    f_g = f_empty
    history = []
    for _ in range(ell):
        keep = int(rng.integers(ell))
        # exclusion is the union of this round's solutions, so G plus new picks
        claimed: set[ElementId] = set(G)
        sols = [_Descent(G.copy(), f_g, M) for _ in range(ell)]
        base_size = len(G)

        def full(d: _Descent) -> bool:
            return len(d.members) - base_size >= m

        for _ in range(m):
            if all(d.exhausted(floor, full) for d in sols):
                break
            for d in sols:
                d.step(f, ground, claimed, floor, eps2, full)
        history.append({"base": G.as_tuple(),
                        "added": [d.members.as_tuple()[base_size:] for d in sols],
                        "accepted": [d.accepted for d in sols],
                        "keep": keep})
        G, f_g = sols[keep].members, sols[keep].value
    return run.record(G, f_g, seed=seed, n=f.n, history=history, ell=ell, M=M)
