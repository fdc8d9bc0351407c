"""Value oracles, query/round accounting and small-instance verification tools.

Every algorithm in the package talks to its objective through a
:class:`ValueOracle`.  The oracle strips dummy elements, validates ids and
charges a shared :class:`QueryLedger`; the objective itself only has to
provide ``value(members)`` and, optionally, a fast local ``gain(x, members)``.
"""

from __future__ import annotations

import itertools
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

ElementId = int

TOLERANCE = 1e-9
BRUTE_FORCE_LIMIT = 22


class OracleError(ValueError):
    """Invalid element id, violated precondition or refused request."""


class SolutionSet:
    """Insertion-ordered set of element ids with O(1) membership."""

    __slots__ = ("_order", "_members")

    def __init__(self, elements: Iterable[ElementId] = ()):
        self._order: list[ElementId] = []
        self._members: set[ElementId] = set()
        for x in elements:
            self.add(x)

    def add(self, x: ElementId) -> None:
        if x in self._members:
            raise OracleError(f"element {x} already in solution")
        self._order.append(x)
        self._members.add(x)

    def extend(self, xs: Iterable[ElementId]) -> None:
        for x in xs:
            self.add(x)

    def copy(self) -> "SolutionSet":
        out = SolutionSet()
        out._order = list(self._order)
        out._members = set(self._members)
        return out

    def __contains__(self, x: object) -> bool:
        return x in self._members

    def __iter__(self) -> Iterator[ElementId]:
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SolutionSet):
            return self._order == other._order
        return NotImplemented

    def __repr__(self) -> str:
        return f"SolutionSet({self._order})"

    def as_tuple(self) -> tuple[ElementId, ...]:
        return tuple(self._order)

    def prefix(self, i: int) -> tuple[ElementId, ...]:
        return tuple(self._order[:i])


class _Joined:
    """Read-only union view of two disjoint member collections."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def __contains__(self, x: object) -> bool:
        return x in self.a or x in self.b

    def __iter__(self):
        yield from self.a
        yield from self.b

    def __len__(self) -> int:
        return len(self.a) + len(self.b)


class _RealOnly:
    """View of a member collection with dummy ids (>= bound) hidden."""

    __slots__ = ("members", "bound")

    def __init__(self, members, bound: int):
        self.members = members
        self.bound = bound

    def __contains__(self, x: object) -> bool:
        return x < self.bound and x in self.members  # type: ignore[operator]

    def __iter__(self):
        return (x for x in self.members if x < self.bound)

    def __len__(self) -> int:
        return sum(1 for _ in self)


class QueryLedger:
    """Thread-safe counters for oracle queries and adaptive rounds.

    ``queries`` counts set-function evaluations: a marginal gain costs 1 when
    the caller already holds f(S) and 2 otherwise.  ``marginals`` counts
    marginal-gain requests regardless of that convention.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.queries = 0
        self.marginals = 0
        self.rounds = 0
        self._frames: list[dict] = []

    def charge(self, queries: int, marginals: int = 0) -> None:
        with self._lock:
            self.queries += queries
            self.marginals += marginals

    def mark_round(self) -> None:
        with self._lock:
            if self._frames and self._frames[-1]["open"]:
                self._frames[-1]["current"] += 1
            else:
                self.rounds += 1

    @contextmanager
    def parallel(self):
        """Group concurrent branches: they cost the max of their rounds.

        >>> ledger = QueryLedger()
        >>> with ledger.parallel() as par:
        ...     with par.branch():
        ...         ledger.mark_round(); ledger.mark_round()
        ...     with par.branch():
        ...         ledger.mark_round()
        >>> ledger.rounds
        2
        """
        frame = {"open": False, "current": 0, "max": 0}
        with self._lock:
            self._frames.append(frame)
        try:
            yield _ParallelSection(self, frame)
        finally:
            with self._lock:
                self._frames.pop()
            for _ in range(frame["max"]):
                self.mark_round()

    def snapshot(self) -> tuple[int, int]:
        return self.queries, self.rounds

    def __repr__(self) -> str:
        return (f"QueryLedger(queries={self.queries}, marginals={self.marginals}, "
                f"rounds={self.rounds})")


class _ParallelSection:
    def __init__(self, ledger: QueryLedger, frame: dict):
        self._ledger = ledger
        self._frame = frame

    @contextmanager
    def branch(self):
        frame = self._frame
        frame["open"] = True
        frame["current"] = 0
        try:
            yield
        finally:
            frame["max"] = max(frame["max"], frame["current"])
            frame["open"] = False


def mark_round(ledger: QueryLedger) -> None:
    ledger.mark_round()


class SetFunction:
    """Adapter turning a plain callable on frozensets into an objective."""

    def __init__(self, n: int, fn: Callable[[frozenset], float]):
        self.n = n
        self.fn = fn

    def value(self, members) -> float:
        return float(self.fn(frozenset(members)))

    def gain(self, x: ElementId, members) -> float:
        base = frozenset(members)
        return float(self.fn(base | {x})) - float(self.fn(base))


class ValueOracle:
    """Ledgered access to a set function over ids ``0..n-1`` plus dummies.

    Parameters
    ----------
    objective
        Any object with ``n``, ``value(members)`` and optionally
        ``gain(x, members)``.  Members passed to it never contain dummies.
    ledger
        Shared counter; a fresh one is created when omitted.
    dummies
        Number of virtual zero-gain ids appended above the real range.
    """

    def __init__(self, objective, ledger: QueryLedger | None = None, dummies: int = 0):
        self.objective = objective
        self.n: int = objective.n
        self.ledger = ledger if ledger is not None else QueryLedger()
        self.dummies = dummies
        self._gain_fn = getattr(objective, "gain", None)

    # -- ground set -------------------------------------------------------
    @property
    def ground(self) -> Sequence[ElementId]:
        return range(self.n)

    @property
    def ground_size(self) -> int:
        return len(self.ground)

    @property
    def size(self) -> int:
        """Exclusive upper bound on valid ids, dummies included."""
        return self.n + self.dummies

    def is_dummy(self, x: ElementId) -> bool:
        return x >= self.n

    def dummy_ids(self) -> range:
        return range(self.n, self.n + self.dummies)

    def _in_ground(self, x: ElementId) -> bool:
        return 0 <= x < self.n

    def _check(self, x) -> None:
        if not isinstance(x, (int, np.integer)) or isinstance(x, bool):
            raise OracleError(f"element id must be an integer, got {x!r}")
        if x >= self.n and x < self.size:
            return
        if not self._in_ground(x):
            raise OracleError(f"invalid element id {x}")

    # -- raw evaluation (no accounting) -----------------------------------
    def _value(self, members) -> float:
        return self.objective.value(members)

    def _gain(self, x: ElementId, members) -> float:
        if self._gain_fn is not None:
            return self._gain_fn(x, members)
        return self.objective.value(_Joined(members, (x,))) - self.objective.value(members)

    def _real(self, members):
        return _RealOnly(members, self.n) if self.dummies else members

    # -- public, ledgered -------------------------------------------------
    def evaluate(self, S: Iterable[ElementId]) -> float:
        items = list(S)
        for x in items:
            self._check(x)
        real = {x for x in items if x < self.n}
        self.ledger.charge(1)
        return self._value(real)

    def marginal_gain(self, x: ElementId, S: Iterable[ElementId], f_S: float | None = None) -> float:
        """f(S+x) - f(S); 1 query if ``f_S`` is supplied, 2 otherwise."""
        self._check(x)
        members = S if isinstance(S, (set, frozenset, SolutionSet)) else set(S)
        for y in members:
            self._check(y)
        if x in members:
            raise OracleError(f"element {x} already in S")
        if x >= self.n:
            return 0.0
        self.ledger.charge(1 if f_S is not None else 2, 1)
        return self._gain(x, self._real(members))

    def gain(self, x: ElementId, members) -> float:
        """Unchecked marginal for algorithm inner loops (caller caches f(S))."""
        if x >= self.n:
            return 0.0
        self.ledger.charge(1, 1)
        return self._gain(x, self._real(members))

    def gains(self, xs: Iterable[ElementId], members) -> list[float]:
        """Unchecked batch of marginals against one cached f(members)."""
        view = self._real(members)
        out = []
        count = 0
        for x in xs:
            if x >= self.n:
                out.append(0.0)
            else:
                out.append(self._gain(x, view))
                count += 1
        self.ledger.charge(count, count)
        return out

    # -- transformations --------------------------------------------------
    def with_dummies(self, count: int) -> "ValueOracle":
        if count < 0:
            raise OracleError("dummy count must be >= 0")
        if count == 0 and self.dummies == 0:
            return self
        return self._rebuild(dummies=count)

    def _rebuild(self, dummies: int, ledger: QueryLedger | None = None) -> "ValueOracle":
        return ValueOracle(self.objective, ledger or self.ledger, dummies)

    def contract(self, base: Iterable[ElementId], allowed: Iterable[ElementId] | None = None) -> "ContractedOracle":
        return contract(self, base, allowed)

    def unledgered(self) -> "ValueOracle":
        """Same function and ground set with a private throwaway ledger."""
        return self._rebuild(dummies=self.dummies, ledger=QueryLedger())


class ContractedOracle(ValueOracle):
    """g(S) = f(base | S) - f(base), restricted to ``allowed``."""

    def __init__(self, parent: ValueOracle, base: Sequence[ElementId], allowed: Iterable[ElementId],
                 ledger: QueryLedger | None = None, dummies: int | None = None):
        self.parent = parent
        self.objective = parent.objective
        self.n = parent.n
        self.ledger = ledger if ledger is not None else parent.ledger
        self.dummies = parent.dummies if dummies is None else dummies
        self._gain_fn = None
        self.base = tuple(base)
        self._base_set = frozenset(self.base)
        self._allowed = frozenset(allowed)
        self._ground = tuple(sorted(self._allowed))
        self._base_value: float | None = None

    @property
    def ground(self) -> Sequence[ElementId]:
        return self._ground

    def _in_ground(self, x: ElementId) -> bool:
        return x in self._allowed

    def base_value(self) -> float:
        if self._base_value is None:
            self.ledger.charge(1)
            self._base_value = self.parent._value(_RealOnly(self._base_set, self.n))
        return self._base_value

    def _value(self, members) -> float:
        return self.parent._value(_Joined(self._base_set, members)) - self.base_value()

    def _gain(self, x: ElementId, members) -> float:
        return self.parent._gain(x, _Joined(self._base_set, members))

    def _rebuild(self, dummies: int, ledger: QueryLedger | None = None) -> "ContractedOracle":
        out = ContractedOracle(self.parent, self.base, self._allowed, ledger or self.ledger, dummies)
        out._base_value = self._base_value
        return out


def evaluate(oracle: ValueOracle, S: Iterable[ElementId]) -> float:
    return oracle.evaluate(S)


def marginal_gain(oracle: ValueOracle, x: ElementId, S: Iterable[ElementId], f_S: float | None = None) -> float:
    return oracle.marginal_gain(x, S, f_S)


def contract(oracle: ValueOracle, base: Iterable[ElementId],
             allowed: Iterable[ElementId] | None = None) -> ContractedOracle:
    """View ``S -> f(base | S) - f(base)`` over ``allowed`` (default: the rest)."""
    base = tuple(x for x in base if x < oracle.n)
    for x in base:
        oracle._check(x)
    base_set = set(base)
    if allowed is None:
        allowed = [x for x in oracle.ground if x not in base_set]
    else:
        allowed = list(allowed)
        for x in allowed:
            oracle._check(x)
            if x in base_set:
                raise OracleError(f"allowed element {x} is part of the base")
        allowed = [x for x in allowed if x < oracle.n]
    if isinstance(oracle, ContractedOracle):
        base = oracle.base + base
        oracle = oracle.parent
    return ContractedOracle(oracle, base, allowed)


def with_dummies(oracle: ValueOracle, count: int) -> ValueOracle:
    return oracle.with_dummies(count)


def brute_force_opt(oracle: ValueOracle, k: int) -> tuple[SolutionSet, float]:
    """Exact argmax of f over |S| <= k; ties go to the lexicographically smallest set."""
    ground = sorted(oracle.ground)
    if len(ground) > BRUTE_FORCE_LIMIT:
        raise OracleError(f"ground set of {len(ground)} elements exceeds the enumeration limit "
                          f"of {BRUTE_FORCE_LIMIT}")
    if k < 0:
        raise OracleError("k must be >= 0")
    best_set: tuple[ElementId, ...] = ()
    best_value = oracle.evaluate(())
    for size in range(1, min(k, len(ground)) + 1):
        for combo in itertools.combinations(ground, size):
            value = oracle.evaluate(combo)
            if value > best_value or (value == best_value and combo < best_set):
                best_set, best_value = combo, value
    return SolutionSet(best_set), best_value


@dataclass
class SubmodularityReport:
    trials: int
    violations: list = field(default_factory=list)
    negatives: list = field(default_factory=list)
    worst: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations and not self.negatives

    def __str__(self) -> str:
        return (f"{len(self.violations)} violations, {len(self.negatives)} negative values "
                f"in {self.trials} trials (worst excess {self.worst:.3g})")


def check_submodular(oracle: ValueOracle, trials: int, seed: int = 0,
                     tol: float = TOLERANCE) -> SubmodularityReport:
    """Sample chains S <= T, x not in T and test diminishing returns and f >= 0."""
    if trials < 1:
        raise OracleError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    ground = np.array(sorted(oracle.ground))
    report = SubmodularityReport(trials=trials)
    if len(ground) == 0:
        return report
    for t in range(trials):
        x_idx = int(rng.integers(len(ground)))
        x = int(ground[x_idx])
        rest = np.delete(ground, x_idx)
        p_t = rng.random()
        T = [int(y) for y in rest[rng.random(len(rest)) < p_t]]
        p_s = rng.random()
        S = [y for y, keep in zip(T, rng.random(len(T)) < p_s) if keep]
        f_S = oracle.evaluate(S)
        f_T = oracle.evaluate(T)
        d_S = oracle.marginal_gain(x, set(S), f_S)
        d_T = oracle.marginal_gain(x, set(T), f_T)
        excess = d_T - d_S
        report.worst = max(report.worst, excess)
        if excess > tol:
            report.violations.append((t, tuple(S), tuple(T), x, d_S, d_T))
        for label, v in (("S", f_S), ("T", f_T)):
            if v < -tol or math.isnan(v):
                report.negatives.append((t, label, v))
    return report
