import itertools
import math

import numpy as np
import pytest


def textbook_si_sdr(y, yhat):
    """Projection form: scaled target over residual energy, unclamped."""
    y = np.asarray(y, float)
    yhat = np.asarray(yhat, float)
    alpha = np.dot(y, yhat) / np.dot(y, y)
    target = alpha * y
    resid = yhat - target
    return 10 * math.log10(np.dot(target, target) / np.dot(resid, resid))


def brute_force(C):
    """Every permutation, cost summed with fsum. Returns (best cost, all optimal perms)."""
    C = np.asarray(C, float)
    n = C.shape[0]
    costs = {p: math.fsum(C[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n))}
    best = min(costs.values())
    return best, sorted(p for p, c in costs.items() if c == best)


def central_diff(f, x, h=1e-5):
    x = np.array(x, float)
    g = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        old = x[idx]
        x[idx] = old + h
        up = f(x)
        x[idx] = old - h
        down = f(x)
        x[idx] = old
        g[idx] = (up - down) / (2 * h)
    return g


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES):
            terminalreporter.write_line(line)
