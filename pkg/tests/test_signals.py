import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sepmatch.signals import (CAP, cost_matrix, mix, neg_si_sdr, neg_si_sdr_grad,
                              pairwise_terms, si_sdr)
from sepmatch.synth import SynthSpec, gen_sources

from conftest import central_diff, rel_err, textbook_si_sdr


def test_hand_value_zero_db():
    assert si_sdr([1.0, 0.0], [1.0, 1.0]) == pytest.approx(0.0, abs=1e-12)
    assert neg_si_sdr([1.0, 0.0], [1.0, 1.0]) == pytest.approx(0.0, abs=1e-12)


def test_identical_and_orthogonal_hit_the_cap():
    assert si_sdr([3.0, 4.0], [3.0, 4.0]) == CAP
    assert si_sdr([1.0, 0.0], [0.0, 1.0]) == -CAP
    assert neg_si_sdr([3.0, 4.0], [3.0, 4.0]) == -CAP
    assert neg_si_sdr([1.0, 0.0], [0.0, 1.0]) == CAP


# the oracle has no tau; tau = 1e-8 moves the value by about
# 4.34 * tau * (1/c^2 + 1/(1 - c^2)) dB, well under 1e-5 here
def test_matches_projection_form(rng):
    for _ in range(50):
        y = rng.standard_normal(128)
        yhat = y + rng.uniform(0.1, 3.0) * rng.standard_normal(128)
        ref = textbook_si_sdr(y, yhat)
        assert abs(ref) < CAP
        assert si_sdr(y, yhat) == pytest.approx(ref, abs=1e-5)


def test_zero_mean_matches_centered_projection(rng):
    y = rng.standard_normal(64) + 2.0
    yhat = y + 0.7 * rng.standard_normal(64) - 1.0
    ref = textbook_si_sdr(y - y.mean(), yhat - yhat.mean())
    assert si_sdr(y, yhat, zero_mean=True) == pytest.approx(ref, abs=1e-5)
    assert si_sdr(y, yhat) != pytest.approx(ref, abs=1e-3)


def test_zero_norm_estimate_is_floor_and_reference_is_error():
    assert si_sdr([1.0, 2.0], [0.0, 0.0]) == -CAP
    with pytest.raises(ValueError):
        si_sdr([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        si_sdr([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        si_sdr([1.0, np.nan], [1.0, 2.0])


finite = st.floats(-1e3, 1e3, allow_nan=False, width=64)


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, 16, elements=finite), arrays(np.float64, 16, elements=finite),
       st.floats(1e-3, 1e3) | st.floats(-1e3, -1e-3))
def test_scale_invariance_and_clamp(y, yhat, alpha):
    if np.linalg.norm(y) < 1e-6 or np.linalg.norm(yhat) < 1e-6:
        return
    base = si_sdr(y, yhat)
    assert -CAP <= base <= CAP
    scaled = si_sdr(y, alpha * yhat)
    if alpha > 0:
        assert scaled == pytest.approx(base, abs=1e-9)
    else:
        # negating the estimate leaves the squared correlation unchanged
        assert scaled == pytest.approx(base, abs=1e-9)


def test_gradient_zero_in_clamp():
    y = np.array([3.0, 4.0, 1.0])
    assert np.all(neg_si_sdr_grad(y, y) == 0.0)
    assert np.all(neg_si_sdr_grad(y, 2.5 * y) == 0.0)


def test_gradient_seed0_length64():
    rng = np.random.default_rng(0)
    y, yhat = rng.standard_normal(64), rng.standard_normal(64)
    g = neg_si_sdr_grad(y, yhat)
    fd = central_diff(lambda v: neg_si_sdr(y, v), yhat, h=1e-5)
    assert rel_err(g, fd) < 1e-6


def test_gradient_orthogonal_to_estimate(rng):
    for _ in range(20):
        y = rng.standard_normal(50)
        yhat = y + rng.standard_normal(50)
        g = neg_si_sdr_grad(y, yhat)
        assert np.linalg.norm(g) > 0
        assert abs(np.dot(g, yhat)) < 1e-10 * np.linalg.norm(g) * np.linalg.norm(yhat)


def test_gradient_fd_zero_mean(rng):
    y = rng.standard_normal(32) + 1
    yhat = y + rng.standard_normal(32)
    g = neg_si_sdr_grad(y, yhat, zero_mean=True)
    fd = central_diff(lambda v: neg_si_sdr(y, v, zero_mean=True), yhat)
    assert rel_err(g, fd) < 1e-5


def test_cost_matrix_examples(rng):
    A = rng.standard_normal((2, 40))
    C = cost_matrix(A, A)
    assert np.all(np.diag(C) == -CAP)
    assert C[0, 1] > -CAP and C[1, 0] > -CAP

    y = rng.standard_normal((1, 30)); p = rng.standard_normal((1, 30))
    assert cost_matrix(y, p).shape == (1, 1)
    assert cost_matrix(y, p)[0, 0] == pytest.approx(neg_si_sdr(y[0], p[0]), abs=1e-12)

    S = gen_sources(SynthSpec(3, 256, seed=4))
    C = cost_matrix(S, np.roll(S, -1, axis=0))
    # prediction j holds source j+1, so target i is best explained by column i-1
    assert [int(np.argmin(C[i])) for i in range(3)] == [(i - 1) % 3 for i in range(3)]
    C = cost_matrix(S, np.roll(S, 1, axis=0))
    assert [int(np.argmin(C[i])) for i in range(3)] == [(i + 1) % 3 for i in range(3)]


def test_cost_matrix_row_minimum_on_diagonal(rng):
    for _ in range(20):
        A = rng.standard_normal((5, 64))
        C = cost_matrix(A, A)
        assert all(int(np.argmin(C[i])) == i for i in range(5))


def test_pairwise_matches_scalar(rng):
    T, P = rng.standard_normal((4, 32)), rng.standard_normal((4, 32))
    sdr = pairwise_terms(T, P)[0]
    for i in range(4):
        for j in range(4):
            assert sdr[i, j] == pytest.approx(si_sdr(T[i], P[j]), abs=1e-12)


def test_mix_examples():
    s = np.array([[1.0, -2.0, 3.0]])
    assert np.array_equal(mix(s), s[0])
    y = np.array([0.5, -1.0, 2.0])
    assert np.all(mix(np.stack([y, -y])) == 0.0)
    l = 256
    t = np.arange(l)
    a, b = np.sin(2 * np.pi * 5 * t / l), np.sin(2 * np.pi * 9 * t / l + 0.3)
    m = mix(np.stack([a, b]))
    assert np.dot(m, m) == pytest.approx(np.dot(a, a) + np.dot(b, b), abs=1e-9)
