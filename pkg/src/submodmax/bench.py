"""Config-driven experiment sweeps with CSV output.

A config is a TOML file::

    output = "er_maxcut.csv"       # relative paths resolve against the config's directory
    repetitions = 5
    epsilon = 0.1
    ell = 5
    base_seed = 0
    k_values = [25, 50, 100]       # omit for the default grid, clipped to n
    reference = "fast_random_greedy"
    timing = true                  # false leaves wall_ms empty, making the CSV byte-reproducible

    [dataset]
    kind = "er"                    # or "edge_list" with path = "graph.txt"
    n = 1000
    p = 0.005
    seed = 7

    [objective]
    name = "maxcut"                # or "revmax" with seed = <params seed>

    [[algorithms]]
    name = "pig"

    [[algorithms]]
    name = "pitg"
    ell = 5                        # per-algorithm epsilon / ell / label override the globals
"""

from __future__ import annotations

import csv
import statistics
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .algorithms import ALGORITHMS, derive_seed, resolve, run_algorithm
from .greedy import RunRecord
from .objectives import MaxCut, RevMax, gen_er, gen_revmax_params, load_edge_list
from .oracle import ValueOracle

CSV_COLUMNS = ("dataset", "objective", "algorithm", "k", "rep", "seed", "value", "queries", "rounds", "wall_ms")
SUMMARY_COLUMNS = ("dataset", "objective", "algorithm", "k", "reps", "value_mean", "value_std",
                   "queries_mean", "queries_std", "rounds_mean", "rounds_std", "wall_ms_mean",
                   "value_normalized")
DEFAULT_K_GRID = (25, 50, 100, 200, 400)


class ConfigError(ValueError):
    pass


@dataclass
class DatasetSpec:
    kind: str
    n: int | None = None
    p: float | None = None
    seed: int = 0
    path: Path | None = None
    name: str | None = None

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.kind == "er":
            return f"er_n{self.n}_p{self.p:g}_s{self.seed}"
        return self.path.stem if self.path else "edge_list"


@dataclass
class ObjectiveSpec:
    name: str
    seed: int = 0


@dataclass
class AlgorithmEntry:
    name: str
    epsilon: float | None = None
    ell: int | None = None
    label: str | None = None

    @property
    def display(self) -> str:
        return self.label or self.name


@dataclass
class ExperimentConfig:
    dataset: DatasetSpec
    objective: ObjectiveSpec
    algorithms: list[AlgorithmEntry]
    k_values: list[int] | None = None
    repetitions: int = 5
    epsilon: float = 0.1
    ell: int = 5
    base_seed: int = 0
    output: Path = Path("results.csv")
    reference: str | None = "fast_random_greedy"
    timing: bool = True


def _require(table: dict, key: str, kind, where: str):
    if key not in table:
        raise ConfigError(f"{where}: missing '{key}'")
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"{where}: '{key}' must be {kind.__name__}, got {value!r}")
    return value


def parse_config(raw: dict, base_dir: Path = Path(".")) -> ExperimentConfig:
    known = {"dataset", "objective", "algorithms", "k_values", "repetitions", "epsilon", "ell",
             "base_seed", "output", "reference", "timing"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")

    ds = raw.get("dataset")
    if not isinstance(ds, dict):
        raise ConfigError("missing [dataset] table")
    kind = _require(ds, "kind", str, "dataset")
    if kind == "er":
        n = _require(ds, "n", int, "dataset")
        p = _require(ds, "p", float, "dataset")
        if n < 1 or not 0.0 <= p <= 1.0:
            raise ConfigError(f"dataset: invalid er parameters n={n}, p={p}")
        dataset = DatasetSpec("er", n=n, p=p, seed=int(ds.get("seed", 0)), name=ds.get("name"))
    elif kind == "edge_list":
        path = Path(_require(ds, "path", str, "dataset"))
        dataset = DatasetSpec("edge_list", path=path if path.is_absolute() else base_dir / path,
                              name=ds.get("name"))
    else:
        raise ConfigError(f"dataset: unknown kind {kind!r} (er, edge_list)")

    obj = raw.get("objective", {"name": "maxcut"})
    if isinstance(obj, str):
        obj = {"name": obj}
    objective = ObjectiveSpec(_require(obj, "name", str, "objective"), int(obj.get("seed", 0)))
    if objective.name not in ("maxcut", "revmax"):
        raise ConfigError(f"objective: unknown name {objective.name!r} (maxcut, revmax)")

    algs_raw = raw.get("algorithms")
    if not algs_raw or not isinstance(algs_raw, list):
        raise ConfigError("at least one [[algorithms]] entry is required")
    algorithms = []
    for entry in algs_raw:
        if isinstance(entry, str):
            entry = {"name": entry}
        name = _require(entry, "name", str, "algorithms")
        try:
            resolve(name)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
        eps = entry.get("epsilon")
        algorithms.append(AlgorithmEntry(name, float(eps) if eps is not None else None,
                                         entry.get("ell"), entry.get("label")))

    cfg = ExperimentConfig(dataset=dataset, objective=objective, algorithms=algorithms)
    if "k_values" in raw:
        ks = raw["k_values"]
        if not isinstance(ks, list) or not ks or not all(isinstance(k, int) and k >= 1 for k in ks):
            raise ConfigError("k_values must be a non-empty list of positive integers")
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ConfigError("k_values must be strictly ascending")
        cfg.k_values = list(ks)
    cfg.repetitions = int(raw.get("repetitions", cfg.repetitions))
    if cfg.repetitions < 1:
        raise ConfigError("repetitions must be >= 1")
    cfg.epsilon = float(raw.get("epsilon", cfg.epsilon))
    if not 0.0 < cfg.epsilon < 1.0:
        raise ConfigError("epsilon must lie in (0, 1)")
    cfg.ell = int(raw.get("ell", cfg.ell))
    cfg.base_seed = int(raw.get("base_seed", cfg.base_seed))
    out = Path(raw.get("output", "results.csv"))
    cfg.output = out if out.is_absolute() else base_dir / out
    cfg.reference = raw.get("reference", cfg.reference) or None
    cfg.timing = bool(raw.get("timing", True))
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(raw, path.parent)


def build_objective(cfg: ExperimentConfig):
    ds = cfg.dataset
    if ds.kind == "er":
        g = gen_er(ds.n, ds.p, ds.seed)
    else:
        g = load_edge_list(ds.path)
    if cfg.objective.name == "maxcut":
        return MaxCut(g)
    return RevMax(g, gen_revmax_params(g, cfg.objective.seed))


def resolve_k_values(cfg: ExperimentConfig, n: int) -> list[int]:
    if cfg.k_values is None:
        ks = [k for k in DEFAULT_K_GRID if k <= n]
        return ks or [n]
    too_big = [k for k in cfg.k_values if k > n]
    if too_big:
        raise ConfigError(f"k values {too_big} exceed the ground set size n={n}")
    return list(cfg.k_values)


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass
class ExperimentResult:
    rows: list[list] = field(default_factory=list)
    summary: list[list] = field(default_factory=list)
    records: dict = field(default_factory=dict)


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Run every (algorithm, k, rep) cell on a fresh ledger and write the CSVs.

    The main CSV holds one row per run followed by one ``rep = mean`` row per
    (algorithm, k); ``<output stem>.summary.csv`` holds means, population
    standard deviations and values normalized by the reference algorithm.
    """
    objective = build_objective(cfg)
    ks = resolve_k_values(cfg, objective.n)
    dataset, obj_name = cfg.dataset.label, cfg.objective.name
    result = ExperimentResult()
    stats: dict[tuple[str, int], list[RunRecord]] = {}
    for entry in cfg.algorithms:
        eps = entry.epsilon if entry.epsilon is not None else cfg.epsilon
        spec = resolve(entry.name)
        if entry.ell is not None:
            ell = entry.ell
        elif spec.name in ("pitg", "interpolated_greedy"):
            ell = cfg.ell
        else:
            ell = None
        for k in ks:
            runs = []
            for rep in range(cfg.repetitions):
                seed = derive_seed(cfg.base_seed, entry.display, k, rep)
                rec = run_algorithm(entry.name, ValueOracle(objective), k, seed=seed, eps=eps, ell=ell)
                runs.append(rec)
                result.rows.append([dataset, obj_name, entry.display, k, rep, rec.seed, _fmt(rec.value),
                                    rec.queries, rec.rounds,
                                    f"{rec.wall_ms:.3f}" if cfg.timing else ""])
            stats[(entry.display, k)] = runs
            result.rows.append([dataset, obj_name, entry.display, k, "mean", "",
                                _fmt(statistics.fmean(r.value for r in runs)),
                                _fmt(statistics.fmean(r.queries for r in runs)),
                                _fmt(statistics.fmean(r.rounds for r in runs)),
                                f"{statistics.fmean(r.wall_ms for r in runs):.3f}" if cfg.timing else ""])
    result.records = stats

    for (label, k), runs in stats.items():
        values = [r.value for r in runs]
        mean_v = statistics.fmean(values)
        ref = stats.get((cfg.reference, k)) if cfg.reference else None
        ref_mean = statistics.fmean(r.value for r in ref) if ref else None
        normalized = _fmt(mean_v / ref_mean) if ref_mean else ""
        result.summary.append([
            dataset, obj_name, label, k, len(runs),
            _fmt(mean_v), _fmt(statistics.pstdev(values)),
            _fmt(statistics.fmean(r.queries for r in runs)), _fmt(statistics.pstdev([r.queries for r in runs])),
            _fmt(statistics.fmean(r.rounds for r in runs)), _fmt(statistics.pstdev([r.rounds for r in runs])),
            f"{statistics.fmean(r.wall_ms for r in runs):.3f}" if cfg.timing else "",
            normalized,
        ])

    if write:
        write_csv(cfg.output, CSV_COLUMNS, result.rows)
        write_csv(summary_path(cfg.output), SUMMARY_COLUMNS, result.summary)
    return result


def summary_path(output: Path) -> Path:
    output = Path(output)
    return output.with_name(output.stem + ".summary.csv")


def write_csv(path: str | Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def record_row(dataset: str, objective: str, algorithm: str, k: int, rep, rec: RunRecord,
               timing: bool = True) -> list:
    return [dataset, objective, algorithm, k, rep, rec.seed, _fmt(rec.value), rec.queries, rec.rounds,
            f"{rec.wall_ms:.3f}" if timing else ""]


__all__ = ["ALGORITHMS", "CSV_COLUMNS", "ConfigError", "ExperimentConfig", "load_config", "parse_config",
           "run_experiment", "write_csv"]
