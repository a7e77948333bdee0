"""Timing of the separation losses as the number of sources grows.

Each (n, trial) pair gets one seeded workload that every method is timed
on, so differences between methods come from the matching step alone.
Three phases are timed separately:

``cost_matrix``
    Building the n x n negative SI-SDR matrix (shared by all methods).
``assignment``
    The method-specific solver on a precomputed cost matrix.
``total``
    The full loss call, gradient included.
"""
from dataclasses import dataclass
import timeit

import numpy as np
from threadpoolctl import threadpool_limits

from .assignment import EXHAUSTIVE_MAX_N, exhaustive_best_permutation, hungarian, sinkhorn, winners
from .losses import LossKind, separation_loss
from .signals import cost_matrix
from .synth import SynthSpec, gen_sources, normals
from .trainer import COMPARED, TrainConfig, compare_methods

PHASES = ("cost_matrix", "assignment", "total")
METHODS = (LossKind.PIT_HUNGARIAN, LossKind.PIT_EXHAUSTIVE, LossKind.SINKPIT, LossKind.MCL)


@dataclass(frozen=True)
class BenchRow:
    n: int
    method: LossKind
    phase: str
    mean_time: float
    std_time: float
    trials: int


def bench_workload(n, l, seed, trial=0):
    """Seeded Gaussian targets and predictions equal to their mixture plus 10% noise."""
    stream = (n << 16) | trial
    targets = normals(seed, (1 << 40) | stream, (n, l))
    mixture = targets.sum(axis=0)
    noise = normals(seed, (2 << 40) | stream, (n, l))
    predictions = mixture[None, :] + 0.1 * np.sqrt(n) * noise
    return targets, predictions


def time_call(fn, min_time=0.005, repeat=3):
    """Seconds per call, best of ``repeat`` batches.

    Calls are batched until one batch lasts ``min_time`` so that timer
    resolution never dominates. GC is off while timing (``timeit``).
    """
    timer = timeit.Timer(fn)
    number = 1
    while True:
        elapsed = timer.timeit(number)
        if elapsed >= min_time or number >= 1 << 20:
            break
        number *= 2 if elapsed == 0 else max(2, int(np.ceil(1.2 * min_time / elapsed)))
    best = elapsed
    for _ in range(repeat - 1):
        best = min(best, timer.timeit(number))
    return best / number


def _solver(method, epsilon):
    if method is LossKind.PIT_HUNGARIAN:
        return hungarian
    if method is LossKind.PIT_EXHAUSTIVE:
        return exhaustive_best_permutation
    if method is LossKind.SINKPIT:
        return lambda C: sinkhorn(C, epsilon)
    return winners


def bench_losses(n_values, l=256, trials=5, seed=0, methods=METHODS, phases=PHASES,
                 epsilon=0.05, min_time=0.005, repeat=3):
    """Mean/std seconds per sample for every (n, method, phase).

    The exhaustive solver is skipped for n > 10. Timed sections run with
    BLAS limited to one thread.
    """
    n_values = [int(n) for n in n_values]
    if n_values != sorted(n_values):
        raise ValueError("n_values must be sorted ascending")
    methods = [LossKind.parse(m) for m in methods]
    for phase in phases:
        if phase not in PHASES:
            raise ValueError(f"unknown phase {phase!r}")
    rows = []
    with threadpool_limits(limits=1):
        for n in n_values:
            times = {}
            for trial in range(trials):
                targets, predictions = bench_workload(n, l, seed, trial)
                C = cost_matrix(targets, predictions)
                for method in methods:
                    if method is LossKind.PIT_EXHAUSTIVE and n > EXHAUSTIVE_MAX_N:
                        continue
                    solve = _solver(method, epsilon)
                    calls = {
                        "cost_matrix": lambda: cost_matrix(targets, predictions),
                        "assignment": lambda: solve(C),
                        "total": lambda: separation_loss(method, targets, predictions, epsilon=epsilon),
                    }
                    for phase in phases:
                        times.setdefault((method, phase), []).append(
                            time_call(calls[phase], min_time, repeat))
            for method in methods:
                for phase in phases:
                    got = times.get((method, phase))
                    if got:
                        rows.append(BenchRow(n, method, phase, float(np.mean(got)),
                                             float(np.std(got)), len(got)))
    return rows


def fit_loglog_slope(rows, method, phase="assignment"):
    """Least-squares slope of log(mean_time) against log(n)."""
    method = LossKind.parse(method)
    pts = sorted((r.n, r.mean_time) for r in rows if r.method is method and r.phase == phase)
    if len({n for n, _ in pts}) < 4:
        raise ValueError(f"need at least 4 distinct n for {method.value}/{phase}, got {len(pts)}")
    n, t = np.array(pts, dtype=np.float64).T
    return float(np.polyfit(np.log(n), np.log(t), 1)[0])


@dataclass(frozen=True)
class EpochRow:
    n: int
    method: LossKind
    wall_time: float
    relative_time: float
    si_sdr: float
    auc_sdr: float
    collapse_rate: float


def relative_epoch_times(n_values=(2, 4, 8, 16), l=1024, config=TrainConfig(steps=500)):
    """End-to-end training wall clock per method, normalized to PIT = 1."""
    out = []
    for n in n_values:
        targets = gen_sources(SynthSpec(n, l, "sinusoid", seed=config.seed))
        summary = compare_methods(targets, config, COMPARED)
        ref = next(s.wall_time for s in summary if s.method is LossKind.PIT_HUNGARIAN)
        for s in summary:
            out.append(EpochRow(n, s.method, s.wall_time, s.wall_time / ref,
                                s.si_sdr, s.auc_sdr, s.collapse_rate))
    return out
