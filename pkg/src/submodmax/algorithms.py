"""Name -> algorithm dispatch used by the benchmark runner and the verify harness."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable

from .baselines import fast_random_greedy, random_greedy
from .greedy import RunRecord, interlace_greedy, interpolated_greedy
from .oracle import ValueOracle
from .parallel import parallel_interpolated_greedy, pig
from .threshold import fast_interlace_greedy, fast_interpolated_greedy


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    runner: Callable[..., RunRecord]
    randomized: bool


def _run_interlace(oracle, k, seed, eps, ell):
    return interlace_greedy(oracle, k)


def _run_interpolated(oracle, k, seed, eps, ell):
    return interpolated_greedy(oracle, k, ell if ell is not None else 2, seed)


def _run_fast_interlace(oracle, k, seed, eps, ell):
    return fast_interlace_greedy(oracle, k, eps)


def _run_fast_interpolated(oracle, k, seed, eps, ell):
    return fast_interpolated_greedy(oracle, k, eps, seed, ell=ell)


def _run_pig(oracle, k, seed, eps, ell):
    return pig(oracle, k, eps, seed)


def _run_pitg(oracle, k, seed, eps, ell):
    return parallel_interpolated_greedy(oracle, k, ell if ell is not None else 5, eps, seed)


def _run_random_greedy(oracle, k, seed, eps, ell):
    return random_greedy(oracle, k, seed)


def _run_fast_random_greedy(oracle, k, seed, eps, ell):
    return fast_random_greedy(oracle, k, eps, seed)


ALGORITHMS: dict[str, AlgorithmSpec] = {
    spec.name: spec
    for spec in (
        AlgorithmSpec("interlace_greedy", _run_interlace, False),
        AlgorithmSpec("interpolated_greedy", _run_interpolated, True),
        AlgorithmSpec("fast_interlace_greedy", _run_fast_interlace, False),
        AlgorithmSpec("fast_interpolated_greedy", _run_fast_interpolated, True),
        AlgorithmSpec("pig", _run_pig, True),
        AlgorithmSpec("pitg", _run_pitg, True),
        AlgorithmSpec("random_greedy", _run_random_greedy, True),
        AlgorithmSpec("fast_random_greedy", _run_fast_random_greedy, True),
    )
}

ALIASES = {
    "parallel_interlace_greedy": "pig",
    "parallel_interpolated_greedy": "pitg",
}


def resolve(name: str) -> AlgorithmSpec:
    key = ALIASES.get(name, name)
    try:
        return ALGORITHMS[key]
    except KeyError:
        raise KeyError(f"unknown algorithm {name!r}; choose from {', '.join(sorted(ALGORITHMS))}") from None


def run_algorithm(name: str, oracle: ValueOracle, k: int, seed: int = 0, eps: float = 0.1,
                  ell: int | None = None) -> RunRecord:
    """Run ``name``; ``ell`` is ignored by algorithms that do not take it.

    For fast_interpolated_greedy ``ell=None`` means the eps-derived default;
    interpolated_greedy and pitg fall back to 2 and 5.
    """
    return resolve(name).runner(oracle, k, seed, eps, ell)


def derive_seed(base: int, *parts) -> int:
    """Stable 31-bit seed from a base seed and labels (process-independent)."""
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return (int(base) ^ int.from_bytes(digest[:4], "big")) & 0x7FFFFFFF
