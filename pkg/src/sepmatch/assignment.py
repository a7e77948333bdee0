"""Matching solvers: exhaustive search, Hungarian, winner-takes-all, Sinkhorn.

All solvers take an ``(n, n)`` cost matrix whose rows index targets and
columns index predictions. A permutation is a tuple ``sigma`` with
``sigma[i]`` the prediction assigned to target ``i``.

The combinatorial solvers (``exhaustive_best_permutation``, ``hungarian``,
``winners``) run as plain interpreted loops over nested lists. They are
timed against each other by the benchmark harness, and a shared execution
model keeps the measured exponents comparable.
"""
from dataclasses import dataclass
from itertools import permutations
import math

import numpy as np
from scipy.special import entr

EXHAUSTIVE_MAX_N = 10


@dataclass(frozen=True)
class AssignmentResult:
    permutation: tuple
    total_cost: float


@dataclass
class TransportPlan:
    entries: np.ndarray
    epsilon: float
    iterations_used: int
    converged: bool
    # log-domain dual potentials, usable as a warm start
    row_potential: np.ndarray = None
    col_potential: np.ndarray = None

    @property
    def n(self):
        return self.entries.shape[0]

    def marginal_error(self):
        rows = np.abs(self.entries.sum(axis=1) - 1.0).max()
        cols = np.abs(self.entries.sum(axis=0) - 1.0).max()
        return float(max(rows, cols))


def _square(C, name="cost matrix"):
    C = np.asarray(C, dtype=np.float64)
    if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] < 1:
        raise ValueError(f"{name} must be square and non-empty, got shape {C.shape}")
    # a sum is finite only if every (moderate-sized) term is
    with np.errstate(over="ignore"):
        total = C.sum()
    if not math.isfinite(total) and not np.isfinite(C).all():
        raise ValueError(f"{name} contains non-finite entries")
    return C


def assignment_cost(C, permutation):
    """Exact (``math.fsum``) sum of ``C[i, sigma[i]]`` in row order."""
    rows = C if isinstance(C, list) else np.asarray(C, dtype=np.float64).tolist()
    return math.fsum([rows[i][j] for i, j in enumerate(permutation)])


def is_permutation(mapping, n=None):
    n = len(mapping) if n is None else n
    return len(mapping) == n and sorted(mapping) == list(range(n))


def exhaustive_best_permutation(C):
    """Minimum-cost permutation by enumerating all ``n!`` candidates.

    Candidates are visited in lexicographic order and only a strictly
    smaller (exactly summed) cost replaces the incumbent, so ties resolve to
    the lexicographically smallest mapping.
    """
    C = _square(C)
    n = C.shape[0]
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(
            f"exhaustive search refused for n={n} > {EXHAUSTIVE_MAX_N} ({n}! permutations)"
        )
    rows = C.tolist()
    fsum = math.fsum
    best = None
    best_cost = math.inf
    for perm in permutations(range(n)):
        cost = fsum([row[j] for row, j in zip(rows, perm)])
        if cost < best_cost:
            best_cost = cost
            best = perm
    return AssignmentResult(tuple(best), best_cost)


def hungarian(C):
    """Minimum-cost perfect matching by shortest augmenting paths, O(n^3).

    Rows are inserted one at a time; each insertion runs a Dijkstra-like
    search over reduced costs ``C[i, j] - u[i] - v[j]`` until it reaches an
    unassigned column, then flips the alternating path. Potentials stay dual
    feasible throughout, so the final matching is optimal.
    """
    C = _square(C)
    n = C.shape[0]
    rows = C.tolist()
    inf = math.inf
    # 1-based columns; column 0 is a sentinel holding the row being inserted
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    owner = [0] * (n + 1)
    way = [0] * (n + 1)
    cols = range(1, n + 1)
    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = owner[j0]
            row = rows[i0 - 1]
            ui = u[i0]
            delta = inf
            j1 = 0
            for j in cols:
                if not used[j]:
                    cur = row[j - 1] - ui - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    sigma = [0] * n
    for j in cols:
        sigma[owner[j] - 1] = j - 1
    sigma = tuple(sigma)
    return AssignmentResult(sigma, assignment_cost(rows, sigma))


def winners(C):
    """Row-wise argmin of ``C`` (winner-takes-all); ties go to the lowest column."""
    C = _square(C)
    out = []
    for row in C.tolist():
        best = 0
        best_val = row[0]
        for j in range(1, len(row)):
            if row[j] < best_val:
                best_val = row[j]
                best = j
        out.append(best)
    return tuple(out)


def _lse_rows(x):
    # max-shifted log-sum-exp along axis 1; scipy's version is far slower on tiny inputs
    top = x.max(axis=1)
    return top + np.log(np.exp(x - top[:, None]).sum(axis=1))


def sinkhorn(C, epsilon=0.05, max_iters=500, tol_marginal=1e-6, init=None):
    r"""Entropy-regularized transport plan between uniform unit marginals.

    Approximately solves

    .. math:: \min_{\pi \in \Pi} \langle \pi, C \rangle - \varepsilon H(\pi)

    over doubly stochastic matrices with alternating row and column
    normalizations carried out on log-domain potentials ``f`` and ``g``,
    ``pi = exp((f[:, None] + g[None, :] - C) / epsilon)``.

    Parameters
    ----------
    C : array_like, shape (n, n)
    epsilon : float
        Regularization strength, in cost units. Must be positive.
    max_iters : int
        Upper bound on row+column sweeps.
    tol_marginal : float
        Stop once every row and column sum is within this of 1.
    init : tuple of arrays, optional
        Warm-start potentials ``(f, g)``, e.g. from a plan at a larger epsilon.

    Returns
    -------
    TransportPlan
        ``converged`` is False when ``max_iters`` ran out first.
    """
    C = _square(C)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    n = C.shape[0]
    scaled = -C / epsilon
    if init is None:
        f = np.zeros(n)
        g = np.zeros(n)
    else:
        f = np.asarray(init[0], dtype=np.float64).copy()
        g = np.asarray(init[1], dtype=np.float64).copy()

    converged = False
    it = 0
    plan = None
    for it in range(1, max_iters + 1):
        f = -epsilon * _lse_rows(scaled + g[None, :] / epsilon)
        g = -epsilon * _lse_rows(scaled.T + f[None, :] / epsilon)
        plan = np.exp(scaled + (f[:, None] + g[None, :]) / epsilon)
        err = max(
            np.abs(plan.sum(axis=1) - 1.0).max(),
            np.abs(plan.sum(axis=0) - 1.0).max(),
        )
        if err < tol_marginal:
            converged = True
            break
    return TransportPlan(plan, float(epsilon), it, converged, f, g)


def transport_dual(plan):
    """Dual objective of the regularized problem at the plan's potentials.

    ``sum(f) + sum(g) - epsilon * (sum(pi) - n)``. It never exceeds the
    regularized optimum, even before convergence, and equals
    ``<pi, C> - epsilon * H(pi)`` once the marginals are met.
    """
    return (math.fsum(plan.row_potential) + math.fsum(plan.col_potential)
            - plan.epsilon * (float(plan.entries.sum()) - plan.n))


def plan_to_permutation(plan):
    """Hard assignment carrying the most plan mass (Hungarian on ``-entries``)."""
    entries = plan.entries if isinstance(plan, TransportPlan) else plan
    return hungarian(-np.asarray(entries, dtype=np.float64)).permutation


def plan_entropy(plan):
    """``-sum(pi * log(pi))`` with ``0 log 0 = 0``."""
    entries = plan.entries if isinstance(plan, TransportPlan) else plan
    return float(entr(np.asarray(entries, dtype=np.float64)).sum())


def permutation_matrix(permutation):
    n = len(permutation)
    P = np.zeros((n, n))
    P[np.arange(n), list(permutation)] = 1.0
    return P
