"""Seeded Monte Carlo failure-time oracle for coded arrays.

Each trial draws one lifetime per leaf component by inverse transform and
collapses them level by level with the order-statistic rule: a block dies
the instant its (t+1)-th child dies.  The empirical survival curve is the
cross-trial validation target for the closed forms in mdscore.

Determinism contract: the outcome is a pure function of (array, model,
trials, seed, grid).  Trials are split into fixed-size chunks whose
per-trial substreams depend only on (seed, trial index), and the reduction
runs in chunk order, so serial and parallel execution are bit-identical.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend, _kernels_py
from .curves import Curve
from .errors import CapacityError, EmptyCurveError
from .hazards import HazardModel
from .mdscore import ArrayConfig, _as_config

MAX_SAMPLES = 10 ** 9       # trials * leaves budget per run
CHUNK_TRIALS = 4096         # fixed: chunking must not depend on worker count

Z_95 = 1.959963984540054    # two-sided 95% normal quantile


@dataclass(frozen=True)
class SimConfig:
    """Everything that determines a simulation run."""

    array: ArrayConfig
    model: HazardModel
    trials: int
    seed: int
    grid: tuple
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "array", _as_config(self.array))
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if not self.grid:
            raise ValueError("grid must not be empty")
        arr = np.asarray(self.grid)
        if np.any(arr < 0) or np.any(np.diff(arr) <= 0):
            raise ValueError("grid must be strictly increasing and >= 0")


@dataclass
class SimOutcome:
    """Empirical survival estimates with binomial confidence half-widths.

    survival_hat is reported raw (not forced monotone); half_width_95 is
    the normal-approximation half width 1.96*sqrt(p(1-p)/trials).
    """

    grid: np.ndarray
    survival_hat: np.ndarray
    half_width_95: np.ndarray
    trials: int
    seed: int
    mean_system_ttf: float
    mean_ttf_stderr: float


class TrialStream:
    """Deterministic uniform source for one trial of one seeded run.

    Draw d of trial j is fixed by (seed, j, d); see _kernels_py for the
    exact SplitMix64 derivation shared by both backends.
    """

    def __init__(self, seed: int, trial_index: int):
        self.seed = seed
        self.trial_index = trial_index

    def uniforms(self, count: int) -> np.ndarray:
        return _backend.uniform_matrix(self.seed, self.trial_index, 1, count)[0]


def _shape_of(config: ArrayConfig):
    sizes = [c.n for c in config.dims]
    kth = [c.t for c in config.dims]
    leaves = 1
    for s in sizes:
        leaves *= s
    return sizes, kth, leaves


def simulate_system_ttf(config, model: HazardModel, stream) -> float:
    """One trial: the failure time of the whole array.

    ``stream`` is a TrialStream or an explicit array of uniforms, one per
    leaf in row-major order (innermost dimension fastest).
    """
    config = _as_config(config)
    sizes, kth, leaves = _shape_of(config)
    if isinstance(stream, TrialStream):
        u = stream.uniforms(leaves)
    else:
        u = np.asarray(stream, dtype=np.float64)
        if u.shape != (leaves,):
            raise ValueError(f"need {leaves} uniforms, got shape {u.shape}")
    ttf = model.sample_ttf(u)
    return float(_kernels_py.order_stat_reduce(ttf.reshape(1, -1), sizes, kth)[0])


def _chunk_root_ttfs(sim: SimConfig, first: int, count: int) -> np.ndarray:
    sizes, kth, leaves = _shape_of(sim.array)
    segments = sim.model.power_segments()
    if segments is not None:
        x0, c0, beta, theta = segments
        return _backend.sim_chunk_powerlaw(
            sim.seed, first, count, sizes, kth, x0, c0, beta, theta)
    u = _backend.uniform_matrix(sim.seed, first, count, leaves)
    ttf = sim.model.inverse_cumulative_hazard(-np.log(u))
    return _kernels_py.order_stat_reduce(ttf, sizes, kth)


def _chunk_stats(sim: SimConfig, grid: np.ndarray, first: int, count: int):
    ttf = _chunk_root_ttfs(sim, first, count)
    counts = (ttf[:, None] > grid[None, :]).sum(axis=0, dtype=np.int64)
    return counts, float(np.sum(ttf)), float(np.sum(ttf * ttf))


def run_simulation(sim: SimConfig) -> SimOutcome:
    """Run all trials and estimate the survival curve on the grid.

    Raises CapacityError before starting when trials * leaves exceeds the
    sample budget.
    """
    _sizes, _kth, leaves = _shape_of(sim.array)
    if sim.trials * leaves > MAX_SAMPLES:
        raise CapacityError(
            f"{sim.trials} trials x {leaves} leaves = {sim.trials * leaves} "
            f"samples exceeds the budget of {MAX_SAMPLES}")
    grid = np.asarray(sim.grid, dtype=np.float64)
    starts = list(range(0, sim.trials, CHUNK_TRIALS))
    jobs = [(s, min(CHUNK_TRIALS, sim.trials - s)) for s in starts]

    if sim.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=sim.workers) as pool:
            results = list(pool.map(
                lambda job: _chunk_stats(sim, grid, job[0], job[1]), jobs))
    else:
        results = [_chunk_stats(sim, grid, s, c) for (s, c) in jobs]

    counts = np.zeros(len(grid), dtype=np.int64)
    total = 0.0
    total_sq = 0.0
    for c, s, s2 in results:    # fixed order: reduction is deterministic
        counts += c
        total += s
        total_sq += s2

    p_hat = counts / float(sim.trials)
    half = Z_95 * np.sqrt(p_hat * (1.0 - p_hat) / sim.trials)
    mean = total / sim.trials
    if sim.trials > 1:
        var = max(total_sq - total * total / sim.trials, 0.0) / (sim.trials - 1)
        stderr = math.sqrt(var / sim.trials)
    else:
        stderr = float("inf")
    return SimOutcome(grid=grid, survival_hat=p_hat, half_width_95=half,
                      trials=sim.trials, seed=sim.seed,
                      mean_system_ttf=mean, mean_ttf_stderr=stderr)


def empirical_hazard(outcome: SimOutcome, smoothing_window: int = 1) -> Curve:
    """Array hazard estimated as -d ln(survival_hat)/dx between grid points.

    Grid points where fewer than 10 trials survive are unreliable and the
    touching intervals are dropped; the remaining differenced values get a
    moving-average smoothing of the requested window.  Raises
    EmptyCurveError when nothing reliable remains.
    """
    if smoothing_window < 1:
        raise ValueError(f"smoothing_window must be >= 1, got {smoothing_window}")
    s = outcome.survival_hat
    x = outcome.grid
    reliable = s > 10.0 / outcome.trials
    ok = reliable[:-1] & reliable[1:]
    if not np.any(ok):
        raise EmptyCurveError("every grid interval is statistically unreliable")
    mids = 0.5 * (x[:-1] + x[1:])[ok]
    raw = ((np.log(s[:-1]) - np.log(s[1:])) / np.diff(x))[ok]
    w = min(smoothing_window, len(raw))
    kernel = np.full(w, 1.0 / w)
    smooth = np.convolve(raw, kernel, mode="valid")
    xs = np.convolve(mids, kernel, mode="valid")
    return Curve(xs=tuple(xs), values=tuple(smooth),
                 quantity="empirical_array_hazard", units="per_hour")
