"""Evaluation metrics: optimal-permutation SI-SDR, AUC-SDR, collapse rate."""
from dataclasses import dataclass

import numpy as np

from .assignment import hungarian
from .losses import LossKind
from .signals import check_pair, pairwise_terms


@dataclass(frozen=True)
class AucSdrReport:
    auc: float
    floor: float
    scores: np.ndarray  # matched-pair SI-SDR, sorted decreasing


def matched_scores(targets, predictions, zero_mean=False):
    """SI-SDR of each Hungarian-matched pair, in target order.

    Returns ``(scores, permutation)``.
    """
    targets, predictions = check_pair(targets, predictions)
    sdr = pairwise_terms(targets, predictions, zero_mean)[0]
    sigma = hungarian(-sdr).permutation
    scores = sdr[np.arange(len(sigma)), list(sigma)]
    return scores, sigma


def optimal_perm_si_sdr(targets, predictions, zero_mean=False):
    scores, _ = matched_scores(targets, predictions, zero_mean)
    return float(np.mean(scores))


def auc_from_scores(scores):
    """AUC-SDR of a vector of per-pair SI-SDR scores.

    Scores are sorted decreasing and mapped affinely so the best score goes
    to 1 and ``min(0, worst score)`` goes to 0; the AUC is the mean of the
    mapped values. If the best score equals that floor (all scores tied at
    a non-positive value) the AUC is 0.

    >>> auc_from_scores([10.0, 5.0, 0.0]).auc
    0.5
    >>> auc_from_scores([6.0, -2.0]).auc
    0.5
    """
    s = np.sort(np.asarray(scores, dtype=np.float64))[::-1]
    if s.size == 0:
        raise ValueError("need at least one score")
    floor = min(0.0, float(s[-1]))
    span = float(s[0]) - floor
    if span <= 0.0:
        return AucSdrReport(0.0, floor, s)
    auc = float(np.mean((s - floor) / span))
    return AucSdrReport(min(max(auc, 0.0), 1.0), floor, s)


def auc_sdr(targets, predictions, zero_mean=False):
    scores, _ = matched_scores(targets, predictions, zero_mean)
    return auc_from_scores(scores)


def usage_collapse(usage):
    usage = np.asarray(usage)
    return float(np.count_nonzero(usage == 0)) / usage.size


def collapse_rate(report):
    """Fraction of predictions that no target selected, from an MCL report."""
    if report.method is not LossKind.MCL:
        raise ValueError(f"collapse rate needs an MCL report, got {report.method.value}")
    return usage_collapse(report.usage)
