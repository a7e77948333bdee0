"""PIT, SinkPIT and MCL objectives with per-pair reporting and gradients.

Every objective is reported per source (divided by ``n``) so the three can
be compared directly. Gradients treat the matching as fixed: the
permutation for PIT, the transport plan for SinkPIT and the winner map for
MCL. Each of those can be written as a weight matrix ``W`` over pairs, and
the reported gradient is that of ``sum_ij W[i, j] * C[i, j] / n``.
"""
from dataclasses import dataclass
import enum
import math

import numpy as np

from .assignment import (
    TransportPlan,
    exhaustive_best_permutation,
    hungarian,
    permutation_matrix,
    transport_dual,
    plan_to_permutation,
    sinkhorn,
    winners,
)
from .signals import check_pair, pairwise_terms, weighted_gradient


class LossKind(enum.Enum):
    PIT_EXHAUSTIVE = "PIT_EXHAUSTIVE"
    PIT_HUNGARIAN = "PIT_HUNGARIAN"
    SINKPIT = "SINKPIT"
    MCL = "MCL"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper().replace("-", "_")
        aliases = {"PIT": "PIT_HUNGARIAN", "HUNGARIAN": "PIT_HUNGARIAN",
                   "EXHAUSTIVE": "PIT_EXHAUSTIVE", "SINKHORN": "SINKPIT"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown loss kind {value!r}") from None


@dataclass
class LossReport:
    loss: float
    matched_pairs: list
    usage: np.ndarray
    weights: np.ndarray
    method: LossKind
    gradient: np.ndarray = None
    costs: np.ndarray = None
    plan: TransportPlan = None

    @property
    def n(self):
        return len(self.usage)

    @property
    def winner_map(self):
        return tuple(j for _, j, _ in self.matched_pairs)


@dataclass(frozen=True)
class EpsilonSchedule:
    """Geometric epsilon annealing for SinkPIT.

    Sinkhorn is run at ``start``, ``start * decay``, ... until the target
    epsilon is reached, each round warm-started from the previous
    potentials. Only the final round's plan enters the loss.
    """

    start: float = 1.0
    decay: float = 0.5

    def epsilons(self, target):
        if not 0.0 < self.decay < 1.0:
            raise ValueError("decay must lie in (0, 1)")
        out = []
        eps = self.start
        while eps > target:
            out.append(eps)
            eps *= self.decay
        out.append(target)
        return out


def _pairs(C, mapping):
    return [(i, j, float(C[i, j])) for i, j in enumerate(mapping)]


def _usage(mapping, n):
    return np.bincount(np.asarray(mapping, dtype=int), minlength=n)


# Cost-matrix level objectives. These take precomputed (or stubbed) pairwise
# losses and return a report without a gradient.

def pit_from_costs(C, solver="hungarian"):
    C = np.asarray(C, dtype=np.float64)
    if solver == "hungarian":
        result, kind = hungarian(C), LossKind.PIT_HUNGARIAN
    elif solver == "exhaustive":
        result, kind = exhaustive_best_permutation(C), LossKind.PIT_EXHAUSTIVE
    else:
        raise ValueError(f"unknown PIT solver {solver!r}")
    n = C.shape[0]
    sigma = result.permutation
    return LossReport(
        loss=result.total_cost / n,
        matched_pairs=_pairs(C, sigma),
        usage=np.ones(n, dtype=int),
        weights=permutation_matrix(sigma),
        method=kind,
        costs=C,
    )


def mcl_from_costs(C):
    C = np.asarray(C, dtype=np.float64)
    n = C.shape[0]
    won = winners(C)
    W = np.zeros((n, n))
    W[np.arange(n), list(won)] = 1.0
    return LossReport(
        loss=math.fsum(C[i, j] for i, j in enumerate(won)) / n,
        matched_pairs=_pairs(C, won),
        usage=_usage(won, n),
        weights=W,
        method=LossKind.MCL,
        costs=C,
    )


def sinkpit_from_costs(C, epsilon=0.05, schedule=None, max_iters=500, tol_marginal=1e-6):
    C = np.asarray(C, dtype=np.float64)
    n = C.shape[0]
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    rounds = [epsilon] if schedule is None else schedule.epsilons(epsilon)
    plan = None
    for eps in rounds:
        init = None if plan is None else (plan.row_potential, plan.col_potential)
        plan = sinkhorn(C, eps, max_iters=max_iters, tol_marginal=tol_marginal, init=init)
    # the dual value: primal <pi, C> - eps H(pi) on an unconverged plan can
    # overshoot the relaxation bound, the dual never does
    value = transport_dual(plan)
    sigma = plan_to_permutation(plan)
    return LossReport(
        loss=value / n,
        matched_pairs=_pairs(C, sigma),
        usage=_usage(sigma, n),
        weights=plan.entries,
        method=LossKind.SINKPIT,
        costs=C,
        plan=plan,
    )


def _with_gradient(report_fn, targets, predictions, zero_mean, **kwargs):
    targets, predictions = check_pair(targets, predictions)
    sdr, a, b, unit_ref = pairwise_terms(targets, predictions, zero_mean)
    report = report_fn(-sdr, **kwargs)
    n = targets.shape[0]
    report.gradient = weighted_gradient(report.weights, a, b, unit_ref, predictions, zero_mean) / n
    return report


def pit_loss(targets, predictions, solver="hungarian", zero_mean=False):
    """Permutation-invariant loss: the best one-to-one matching, averaged."""
    return _with_gradient(pit_from_costs, targets, predictions, zero_mean, solver=solver)


def sinkpit_loss(targets, predictions, epsilon=0.05, schedule=None, zero_mean=False,
                 max_iters=500, tol_marginal=1e-6):
    """Entropy-regularized transport relaxation of PIT, per source.

    ``matched_pairs`` comes from rounding the plan and is for reporting only;
    the loss and gradient use the full plan. Non-convergence of Sinkhorn is
    visible on ``report.plan.converged`` and is not an error.
    """
    return _with_gradient(sinkpit_from_costs, targets, predictions, zero_mean,
                          epsilon=epsilon, schedule=schedule,
                          max_iters=max_iters, tol_marginal=tol_marginal)


def mcl_loss(targets, predictions, zero_mean=False):
    """Winner-takes-all loss: each target picks its closest prediction.

    Several targets may pick the same prediction (``usage > 1``); predictions
    nobody picked get a zero gradient.
    """
    return _with_gradient(mcl_from_costs, targets, predictions, zero_mean)


def separation_loss(kind, targets, predictions, epsilon=0.05, zero_mean=False, **kwargs):
    kind = LossKind.parse(kind)
    if kind is LossKind.PIT_HUNGARIAN:
        return pit_loss(targets, predictions, "hungarian", zero_mean)
    if kind is LossKind.PIT_EXHAUSTIVE:
        return pit_loss(targets, predictions, "exhaustive", zero_mean)
    if kind is LossKind.SINKPIT:
        return sinkpit_loss(targets, predictions, epsilon, zero_mean=zero_mean, **kwargs)
    return mcl_loss(targets, predictions, zero_mean)


def fixed_weight_loss(targets, predictions, weights, zero_mean=False):
    """``sum_ij weights[i, j] * C[i, j] / n`` for a frozen matching.

    Used to check reported gradients by finite differences.
    """
    targets, predictions = check_pair(targets, predictions)
    sdr = pairwise_terms(targets, predictions, zero_mean)[0]
    return float(np.sum(np.asarray(weights) * -sdr)) / targets.shape[0]
