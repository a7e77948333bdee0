"""Waveform validation, SI-SDR and pairwise cost matrices.

Signals are 1-D float64 arrays; a set of ``n`` sources is a ``(n, l)``
float64 array. The pairwise loss used by every objective in this package
is the negated, clamped SI-SDR.
"""
import math

import numpy as np

CAP = 30.0
TAU = 1e-8

_DB = 10.0 / math.log(10.0)


def as_signal(x, name="signal"):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {x.shape}")
    if x.size < 1:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite samples")
    return x


def as_source_set(x, name="sources"):
    """Validate and return a ``(n, l)`` float64 array of equal-length signals."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2:
        raise ValueError(f"{name} must be 2-D (n, l), got shape {x.shape}")
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"{name} must have n >= 1 and l >= 1, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite samples")
    return x


def check_pair(targets, predictions):
    targets = as_source_set(targets, "targets")
    predictions = as_source_set(predictions, "predictions")
    if targets.shape != predictions.shape:
        raise ValueError(
            f"shape mismatch: targets {targets.shape} vs predictions {predictions.shape}"
        )
    return targets, predictions


def mix(sources):
    """Instantaneous mixture: the sample-wise sum of all sources."""
    return as_source_set(sources).sum(axis=0)


def pairwise_terms(targets, predictions, zero_mean=False):
    """Clamped SI-SDR for every (target, prediction) pair plus gradient pieces.

    Returns ``(sdr, coef_ref, coef_est, unit_ref)`` where ``sdr[i, j]`` is the
    clamped SI-SDR of prediction ``j`` against target ``i`` and the gradient of
    ``-sdr[i, j]`` with respect to prediction ``j`` is
    ``coef_ref[i, j] * unit_ref[i] + coef_est[i, j] * predictions[j]``.
    Pairs inside the clamp (and zero-norm predictions) have zero gradient.

    Both signals are scaled to unit norm before the ratio is formed, so the
    ratio is ``(c**2 + TAU) / (1 - c**2 + TAU)`` with ``c`` the cosine between
    them. That is the printed ratio divided through by the energy product and
    keeps scale invariance exact for any rescaling of the estimate.
    """
    targets = as_source_set(targets, "targets")
    predictions = as_source_set(predictions, "predictions")
    if targets.shape[1] != predictions.shape[1]:
        raise ValueError(
            f"length mismatch: {targets.shape[1]} vs {predictions.shape[1]}"
        )
    if zero_mean:
        targets = targets - targets.mean(axis=1, keepdims=True)
        predictions = predictions - predictions.mean(axis=1, keepdims=True)

    ref_norm = np.sqrt(np.einsum("il,il->i", targets, targets))
    if np.any(ref_norm == 0.0):
        raise ValueError("reference signal has zero norm; SI-SDR is undefined")
    est_norm = np.sqrt(np.einsum("jl,jl->j", predictions, predictions))
    live = est_norm > 0.0
    safe_norm = np.where(live, est_norm, 1.0)

    unit_ref = targets / ref_norm[:, None]
    cos = (unit_ref @ predictions.T) / safe_norm[None, :]
    cos = np.clip(cos, -1.0, 1.0)
    cos2 = cos * cos
    num = cos2 + TAU
    den = (1.0 - cos2) + TAU
    raw = _DB * (np.log(num) - np.log(den))
    raw = np.where(live[None, :], raw, -CAP)
    sdr = np.clip(raw, -CAP, CAP)

    active = (raw > -CAP) & (raw < CAP) & live[None, :]
    slope = np.where(active, _DB * 2.0 * cos * (1.0 / num + 1.0 / den), 0.0)
    # d(-sdr)/d(est) = -slope * (unit_ref - cos * est / |est|) / |est|
    coef_ref = -slope / safe_norm[None, :]
    coef_est = slope * cos / (safe_norm * safe_norm)[None, :]
    return sdr, coef_ref, coef_est, unit_ref


def si_sdr(reference, estimate, zero_mean=False):
    """SI-SDR in dB, clamped to ``[-CAP, CAP]``.

    >>> abs(si_sdr([1.0, 0.0], [1.0, 1.0])) < 1e-12
    True
    >>> si_sdr([3.0, 4.0], [6.0, 8.0])
    30.0
    """
    reference = as_signal(reference, "reference")
    estimate = as_signal(estimate, "estimate")
    if reference.size != estimate.size:
        raise ValueError(f"length mismatch: {reference.size} vs {estimate.size}")
    sdr = pairwise_terms(reference[None], estimate[None], zero_mean)[0]
    return float(sdr[0, 0])


def neg_si_sdr(reference, estimate, zero_mean=False):
    return -si_sdr(reference, estimate, zero_mean)


def neg_si_sdr_grad(reference, estimate, zero_mean=False):
    """Gradient of ``neg_si_sdr`` with respect to ``estimate``.

    Zero where the clamp is active. When ``zero_mean`` is set the centering
    projection is already folded in: the result sums to zero.
    """
    reference = as_signal(reference, "reference")
    estimate = as_signal(estimate, "estimate")
    if reference.size != estimate.size:
        raise ValueError(f"length mismatch: {reference.size} vs {estimate.size}")
    _, a, b, unit_ref = pairwise_terms(reference[None], estimate[None], zero_mean)
    est = estimate - estimate.mean() if zero_mean else estimate
    return a[0, 0] * unit_ref[0] + b[0, 0] * est


def cost_matrix(targets, predictions, zero_mean=False):
    """``C[i, j] = neg_si_sdr(targets[i], predictions[j])``; rows index targets."""
    targets, predictions = check_pair(targets, predictions)
    return -pairwise_terms(targets, predictions, zero_mean)[0]


def weighted_gradient(weights, coef_ref, coef_est, unit_ref, predictions, zero_mean=False):
    """Gradient of ``sum_ij weights[i, j] * C[i, j]`` with respect to predictions.

    ``weights`` is held constant (a permutation matrix, a winner indicator,
    or a transport plan).
    """
    predictions = np.asarray(predictions, dtype=np.float64)
    if zero_mean:
        predictions = predictions - predictions.mean(axis=1, keepdims=True)
    grad = (weights * coef_ref).T @ unit_ref
    grad += (weights * coef_est).sum(axis=0)[:, None] * predictions
    return grad
