"""Brute-force ratio suites and adaptivity probes.

``ratio_suite`` runs an algorithm over a family of tiny instances, compares
each result with the exact optimum and counts runs that fall below the
algorithm's guaranteed fraction of it.  ``adaptivity_probe`` measures how
queries and rounds grow with n on sparse random graphs.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .algorithms import derive_seed, resolve, run_algorithm
from .bench import CSV_COLUMNS, record_row, write_csv
from .greedy import RunRecord
from .objectives import MaxCut, RevMax, gen_er, gen_revmax_params
from .oracle import TOLERANCE, OracleError, SetFunction, ValueOracle, brute_force_opt

SUITE_LIMIT = 12


@dataclass(frozen=True)
class Bound:
    """Guaranteed fraction of OPT; ``kind`` says how it holds."""

    ratio: Callable[[float], float]
    kind: str  # "always", "whp" or "expected"


BOUNDS: dict[str, Bound] = {
    "interlace_greedy": Bound(lambda eps: 0.25, "always"),
    "fast_interlace_greedy": Bound(lambda eps: 0.25 - eps, "always"),
    "pig": Bound(lambda eps: 0.25 - eps, "whp"),
    "interpolated_greedy": Bound(lambda eps: 1.0 / math.e, "expected"),
    "fast_interpolated_greedy": Bound(lambda eps: 1.0 / math.e - eps, "expected"),
    "pitg": Bound(lambda eps: 1.0 / math.e - eps, "expected"),
    "random_greedy": Bound(lambda eps: 1.0 / math.e, "expected"),
    "fast_random_greedy": Bound(lambda eps: 1.0 / math.e - eps, "expected"),
}


@dataclass(frozen=True)
class Instance:
    name: str
    objective_name: str
    objective: object
    k: int

    @property
    def n(self) -> int:
        return self.objective.n

    def oracle(self) -> ValueOracle:
        return ValueOracle(self.objective)


def maxcut_instance(n: int, p: float, seed: int, k: int) -> Instance:
    return Instance(f"maxcut_er_n{n}_p{p:g}_s{seed}", "maxcut", MaxCut(gen_er(n, p, seed)), k)


def revmax_instance(n: int, p: float, seed: int, k: int) -> Instance:
    g = gen_er(n, p, seed)
    return Instance(f"revmax_er_n{n}_p{p:g}_s{seed}", "revmax", RevMax(g, gen_revmax_params(g, seed)), k)


def modular_instance(n: int, k: int) -> Instance:
    return Instance(f"modular_n{n}", "modular", SetFunction(n, len), k)


def small_family(count: int = 200, seed: int = 0, ks: Sequence[int] = (2, 3, 4)) -> list[Instance]:
    """Alternating maxcut (n in 6..12) and revmax (n in 6..10) instances on seeded ER graphs."""
    rng = np.random.default_rng(seed)
    family = []
    for i in range(count):
        p = (0.3, 0.5)[int(rng.integers(2))]
        graph_seed = int(rng.integers(2 ** 31))
        k = ks[i % len(ks)]
        if i % 2 == 0:
            family.append(maxcut_instance(int(rng.integers(6, 13)), p, graph_seed, k))
        else:
            family.append(revmax_instance(int(rng.integers(6, 11)), p, graph_seed, k))
    return family


def reverse_enumeration_opt(objective, k: int) -> float:
    """OPT by walking bitmasks from the full set downward, straight on the objective."""
    n = objective.n
    best = -math.inf
    for mask in range((1 << n) - 1, -1, -1):
        if mask.bit_count() > k:
            continue
        members = tuple(i for i in range(n) if mask >> i & 1)
        best = max(best, float(objective.value(members)))
    return best


@dataclass
class InstanceReport:
    instance: Instance
    opt: float
    values: list[float]
    records: list[RunRecord]
    bound: float

    @property
    def ratios(self) -> list[float]:
        if self.opt <= 0.0:
            return [1.0] * len(self.values)
        return [v / self.opt for v in self.values]

    @property
    def mean(self) -> float:
        return statistics.fmean(self.values)

    @property
    def std(self) -> float:
        return statistics.pstdev(self.values) if len(self.values) > 1 else 0.0

    @property
    def stderr(self) -> float:
        return self.std / math.sqrt(len(self.values))

    @property
    def run_violations(self) -> int:
        return sum(v < self.bound * self.opt - TOLERANCE for v in self.values)

    @property
    def mean_violation(self) -> bool:
        return self.mean < self.bound * self.opt - 3.0 * self.stderr - TOLERANCE


@dataclass
class SuiteReport:
    algorithm: str
    eps: float
    bound: float
    kind: str
    instances: list[InstanceReport] = field(default_factory=list)
    structural: list[str] = field(default_factory=list)

    @property
    def runs(self) -> int:
        return sum(len(r.values) for r in self.instances)

    @property
    def min_ratio(self) -> float:
        return min(min(r.ratios) for r in self.instances)

    @property
    def mean_ratio(self) -> float:
        return statistics.fmean(x for r in self.instances for x in r.ratios)

    @property
    def violations(self) -> int:
        return sum(r.run_violations for r in self.instances)

    @property
    def mean_violations(self) -> list[InstanceReport]:
        return [r for r in self.instances if r.mean_violation]

    @property
    def pass_rate(self) -> float:
        return 1.0 - self.violations / self.runs

    def rows(self) -> list[list]:
        out = []
        for r in self.instances:
            for rep, rec in enumerate(r.records):
                out.append(record_row(r.instance.name, r.instance.objective_name, self.algorithm,
                                      r.instance.k, rep, rec, timing=False))
        return out

    def write_csv(self, path) -> None:
        write_csv(path, CSV_COLUMNS, self.rows())

    def __str__(self) -> str:
        return (f"{self.algorithm}: {len(self.instances)} instances, {self.runs} runs, "
                f"min ratio {self.min_ratio:.4f}, mean ratio {self.mean_ratio:.4f}, "
                f"{self.violations} runs below {self.bound:.4f}*OPT, "
                f"{len(self.mean_violations)} instance means below bound - 3 se, "
                f"{len(self.structural)} structural violations")


def pig_structure_problems(oracle: ValueOracle, rec: RunRecord, tol: float = TOLERANCE) -> list[str]:
    """Disjointness, filtered-subset and filtered-not-worse checks on a pig or pitg record."""
    f = oracle.unledgered()
    problems = []
    if "full" in rec.info and "history" not in rec.info:
        blocks = [((), rec.info["full"], rec.info["filtered"])]
    else:
        blocks = [(h["base"], h["full"], h["filtered"]) for h in rec.info.get("history", [])]
    for base, full, filtered in blocks:
        seen: set = set()
        for j, (a, a_kept) in enumerate(zip(full, filtered)):
            if seen & set(a):
                problems.append(f"solution {j} overlaps an earlier one (base {base})")
            seen |= set(a)
            if not set(a_kept) <= set(a):
                problems.append(f"filtered solution {j} is not a subset (base {base})")
            v_full = f.evaluate(tuple(base) + tuple(a))
            v_kept = f.evaluate(tuple(base) + tuple(a_kept))
            if v_kept < v_full - tol:
                problems.append(f"filtered solution {j} lost value {v_full - v_kept:.3g} (base {base})")
    return problems


def ratio_suite(family: Sequence[Instance], algorithm: str, runs: int = 1, seed: int = 0,
                eps: float = 0.1, ell: int | None = None) -> SuiteReport:
    """Run ``algorithm`` on every instance and compare with the brute-force optimum.

    Deterministic algorithms run once per instance whatever ``runs`` says.
    OPT is computed twice by independent enumerations and they must agree.
    """
    spec = resolve(algorithm)
    too_big = [inst.name for inst in family if inst.n > SUITE_LIMIT]
    if too_big:
        raise OracleError(f"ratio_suite only handles n <= {SUITE_LIMIT}; got {too_big[:3]}")
    bound = BOUNDS[spec.name]
    report = SuiteReport(spec.name, eps, bound.ratio(eps), bound.kind)
    reps = runs if spec.randomized else 1
    for inst in family:
        _, opt = brute_force_opt(inst.oracle(), inst.k)
        again = reverse_enumeration_opt(inst.objective, inst.k)
        if again != opt:
            raise AssertionError(f"{inst.name}: enumerations disagree ({opt!r} vs {again!r})")
        records = []
        for rep in range(reps):
            oracle = inst.oracle()
            rec = run_algorithm(spec.name, oracle, inst.k, seed=derive_seed(seed, inst.name, rep),
                                eps=eps, ell=ell)
            records.append(rec)
            if spec.name in ("pig", "pitg"):
                report.structural.extend(f"{inst.name} rep {rep}: {p}"
                                         for p in pig_structure_problems(oracle, rec))
        report.instances.append(InstanceReport(inst, opt, [r.value for r in records], records,
                                               report.bound))
    return report


@dataclass
class ProbePoint:
    n: int
    k: int
    queries: int
    rounds: int
    record: RunRecord


@dataclass
class ProbeReport:
    algorithm: str
    points: list[ProbePoint]

    def growth(self, attr: str) -> list[float]:
        """Ratio of ``attr`` between consecutive sizes."""
        vals = [getattr(p, attr) for p in self.points]
        return [b / a if a else math.inf for a, b in zip(vals, vals[1:])]

    def exponents(self, attr: str) -> list[float]:
        """log(growth) / log(size ratio); about 1 for linear, near 0 for logarithmic."""
        out = []
        for (p, q), g in zip(zip(self.points, self.points[1:]), self.growth(attr)):
            out.append(math.log(g) / math.log(q.n / p.n) if g > 0 and math.isfinite(g) else math.nan)
        return out

    def rows(self) -> list[list]:
        return [record_row(f"er_n{p.n}", "maxcut", self.algorithm, p.k, 0, p.record, timing=False)
                for p in self.points]


def _k_for(k_rule, n: int) -> int:
    if callable(k_rule):
        return int(k_rule(n))
    if isinstance(k_rule, Mapping):
        return int(k_rule[n])
    return int(k_rule)


def adaptivity_probe(algorithm: str, sizes: Sequence[int], k_rule, eps: float = 0.1, seed: int = 0,
                     ell: int | None = None, degree: float = 5.0) -> ProbeReport:
    """Run ``algorithm`` on maxcut over ER(n, degree/n) for each n in ``sizes``.

    ``k_rule`` is an int, a mapping n -> k, or a callable of n.
    """
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise OracleError("sizes must be strictly ascending")
    points = []
    for n in sizes:
        k = _k_for(k_rule, n)
        g = gen_er(n, min(1.0, degree / n), derive_seed(seed, "graph", n))
        rec = run_algorithm(algorithm, ValueOracle(MaxCut(g)), k, seed=derive_seed(seed, algorithm, n),
                            eps=eps, ell=ell)
        points.append(ProbePoint(n, k, rec.queries, rec.rounds, rec))
    return ProbeReport(resolve(algorithm).name, points)


def prefix_progress_failures(oracle: ValueOracle, s: int, tau: float, eps: float, trials: int,
                             seed: int = 0) -> float:
    """Fraction of seeded prefix selections with i* < min(s, t).

    t is the first prefix length after which at least eps * |V| / 2 of
    the candidates have marginal below ``tau`` (members of the prefix count).
    Candidates are the whole ground set, which must all clear ``tau`` alone.
    """
    from .parallel import prefix_selection

    g = oracle.unledgered()
    universe = list(g.ground)
    if any(g.marginal_gain(x, ()) < tau for x in universe):
        raise OracleError("every candidate must clear tau on its own")
    fails = 0
    for trial in range(trials):
        i_star, _, order = prefix_selection(oracle, universe, s, tau, eps, seed=derive_seed(seed, trial))
        t = len(order)
        for i in range(len(order) + 1):
            prefix = set(order[:i])
            below = sum(1 for x in universe if x in prefix or g.marginal_gain(x, prefix) < tau)
            if below >= eps * len(universe) / 2:
                t = i
                break
        fails += i_star < min(s, t)
    return fails / trials


def group_coverage(n: int, group: int) -> SetFunction:
    """f(S) = number of distinct blocks of ``group`` consecutive ids that S touches."""
    return SetFunction(n, lambda members: len({x // group for x in members}))
