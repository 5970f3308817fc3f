"""Monte Carlo sweeps of average received power and selected fraction versus K."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from beamselect.bounds import bound_constants
from beamselect.channel import RngSeed, sample_channel
from beamselect.selection import (
    amplitude_threshold_select,
    coherent_composite,
    exhaustive_select,
    greedy_select,
    sector_select,
    single_best_select,
    with_fallback,
)

ALGORITHMS = ("exhaustive", "greedy", "sector", "upper_bound", "single_best")
THREADS_ENV = "BEAMSELECT_THREADS"


def default_trials(K: int) -> int:
    if K <= 100:
        return 10_000
    if K <= 1000:
        return 1_000
    return 100


def stream_id(K: int, trial: int) -> int:
    """Substream for one (K, trial) cell; both indices must fit in 32 bits."""
    if not (0 < K < 1 << 32 and 0 <= trial < 1 << 32):
        raise ValueError("K and trial index must fit in 32 bits")
    return K << 32 | trial


def worker_count(requested: int | None = None) -> int:
    if requested is None:
        env = os.environ.get(THREADS_ENV)
        requested = int(env) if env else (os.cpu_count() or 1)
    return max(1, requested)


@dataclass(frozen=True)
class SweepConfig:
    k_values: Sequence[int]
    trials: int | None = None  # None: default_trials(K) per K
    master_seed: int = 0
    algorithms: Sequence[str] = ALGORITHMS
    exhaustive_k_cap: int = 12
    r: float | None = None
    alpha: float | None = None
    workers: int | None = None

    def __post_init__(self):
        ks = [int(k) for k in self.k_values]
        if not ks:
            raise ValueError("k_values must not be empty")
        if any(k < 1 for k in ks) or ks != sorted(set(ks)):
            raise ValueError("k_values must be strictly ascending positive integers")
        object.__setattr__(self, "k_values", tuple(ks))
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be at least 1")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown or not self.algorithms:
            raise ValueError(f"unknown algorithms {unknown}; choose from {ALGORITHMS}")
        object.__setattr__(self, "algorithms", tuple(dict.fromkeys(self.algorithms)))
        if not 0 <= self.master_seed < 1 << 64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")

    def trials_for(self, K: int) -> int:
        return self.trials if self.trials is not None else default_trials(K)


@dataclass(frozen=True)
class SweepCell:
    algorithm: str
    k: int
    mean_power: float
    mean_fraction: float
    std_err_power: float
    trials: int

    @property
    def mean_power_over_k(self) -> float:
        return self.mean_power / self.k


@dataclass
class SweepResult:
    config: SweepConfig
    cells: dict[tuple[str, int], SweepCell] = field(default_factory=dict)
    skipped: list[tuple[str, int]] = field(default_factory=list)
    # per-trial dominance violations, only counted where exhaustive ran
    violations: dict[int, int] = field(default_factory=dict)

    def cell(self, algorithm: str, K: int) -> SweepCell:
        return self.cells[(algorithm, K)]

    def records(self) -> list[SweepCell]:
        """Cells ordered by configured algorithm order, then ascending K."""
        order = {a: i for i, a in enumerate(self.config.algorithms)}
        return sorted(self.cells.values(), key=lambda c: (order[c.algorithm], c.k))


def _evaluate(K, trial, seed, algorithms, r, alpha):
    """(power, selected count) for each algorithm on one shared realization."""
    h = sample_channel(K, RngSeed(seed, stream_id(K, trial)))
    out = np.empty((len(algorithms), 2))
    for j, name in enumerate(algorithms):
        if name == "exhaustive":
            o = exhaustive_select(h, cap=K)
        elif name == "greedy":
            o = greedy_select(h)
        elif name == "sector":
            o = with_fallback(sector_select(h, r, alpha), h)
        elif name == "upper_bound":
            o = with_fallback(amplitude_threshold_select(h, r), h, gain=coherent_composite)
        else:
            o = single_best_select(h)
        out[j] = o.power, o.count
    return out


def run_sweep(config: SweepConfig) -> SweepResult:
    """Average every requested algorithm over ``trials`` realizations per K.

    Trial t at node count K always draws from substream (K, t), and all
    algorithms share that realization, so results do not depend on how the
    trials are spread over worker threads.
    """
    consts = bound_constants()
    r = consts.r_star if config.r is None else config.r
    alpha = consts.alpha_star if config.alpha is None else config.alpha
    result = SweepResult(config)
    workers = worker_count(config.workers)

    for K in config.k_values:
        algorithms = []
        for name in config.algorithms:
            if name == "exhaustive" and K > config.exhaustive_k_cap:
                result.skipped.append((name, K))
            else:
                algorithms.append(name)
        if not algorithms:
            continue
        n = config.trials_for(K)
        samples = np.empty((n, len(algorithms), 2))

        def fill(chunk: range) -> None:
            for t in chunk:
                samples[t] = _evaluate(K, t, config.master_seed, algorithms, r, alpha)

        chunks = _chunks(n, workers)
        if workers == 1 or len(chunks) == 1:
            for chunk in chunks:
                fill(chunk)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(fill, chunks))

        for j, name in enumerate(algorithms):
            power = samples[:, j, 0]
            std_err = float(power.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
            result.cells[(name, K)] = SweepCell(
                algorithm=name,
                k=K,
                mean_power=float(power.mean()),
                mean_fraction=float(samples[:, j, 1].mean() / K),
                std_err_power=std_err,
                trials=n,
            )
        if {"exhaustive", "greedy", "single_best"} <= set(algorithms):
            col = {a: samples[:, j, 0] for j, a in enumerate(algorithms)}
            bad = (col["exhaustive"] < col["greedy"]) | (col["greedy"] < col["single_best"])
            if "sector" in col:
                bad |= col["exhaustive"] < col["sector"]
            result.violations[K] = int(np.count_nonzero(bad))
    return result


def _chunks(n: int, workers: int) -> list[range]:
    size = max(1, math.ceil(n / (workers * 4)))
    return [range(i, min(i + size, n)) for i in range(0, n, size)]


def harmonic_expectation(K: int) -> float:
    """E[max of K i.i.d. Exp(1)] = H_K, the single-best expected power."""
    if K < 1:
        raise ValueError(f"K must be positive, got {K}")
    return math.fsum(1.0 / i for i in range(1, K + 1))


def scaling_fit(
    result: SweepResult, algorithm: str, k_values: Iterable[int] | None = None
) -> float:
    """Least-squares slope of mean power against K."""
    wanted = None if k_values is None else set(k_values)
    pts = sorted(
        (c.k, c.mean_power)
        for c in result.cells.values()
        if c.algorithm == algorithm and (wanted is None or c.k in wanted)
    )
    if len(pts) < 3:
        raise ValueError(f"need at least 3 K values for {algorithm!r}, got {len(pts)}")
    ks, powers = np.array(pts).T
    slope, _ = np.polyfit(ks, powers, 1)
    return float(slope)
