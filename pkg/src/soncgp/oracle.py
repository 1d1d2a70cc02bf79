"""Brute-force numerical checks, independent of the certificate machinery.

``approx_min`` returns an upper bound on the global minimum (the value at a
point it found); ``check_lower_bound`` looks for points where a claimed lower
bound fails. Neither proves anything, but they catch wrong certificates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .poly import Polynomial

__all__ = ["SamplingReport", "approx_min", "check_lower_bound", "lower_bound_violation"]

N_STARTS = 32
DESCENT_ITERS = 500
MAX_RADIUS = 1e4
CHECK_TOL = 1e-6


@dataclass
class SamplingReport:
    best_point: np.ndarray
    best_value: float
    evaluations: int
    method: str  # grid | multistart-descent
    seed: int
    box_radius: float


def _axis_values(k: int, radius: float) -> np.ndarray:
    mags = np.logspace(-3, math.log10(radius), k)
    return np.concatenate([[0.0], mags, -mags])


def _grid_samples(n, budget, radius, rng):
    """Signed log-spaced points: every orthant, magnitudes from 1e-3 to ``radius``."""
    k = max(2, int((budget ** (1.0 / n) - 1) / 2))
    vals = _axis_values(k, radius)
    if len(vals) ** n <= budget:
        return np.array(list(itertools.product(vals, repeat=n)))
    return rng.choice(vals, size=(budget, n))


def _descend(f: Polynomial, X0: np.ndarray, radius: float):
    """Batched gradient descent with central-difference gradients and backtracking."""
    X = X0.copy()
    n = X.shape[1]
    vals = f.evaluate_many(X)
    steps = np.full(len(X), 1e-2)
    evals = len(X)
    eye = np.eye(n)
    for _ in range(DESCENT_ITERS):
        h = 1e-6 * np.maximum(1.0, np.abs(X))
        pts = np.concatenate([X[:, None, :] + h[:, :, None] * eye, X[:, None, :] - h[:, :, None] * eye], axis=1)
        fv = f.evaluate_many(pts.reshape(-1, n)).reshape(len(X), 2 * n)
        evals += fv.size
        G = (fv[:, :n] - fv[:, n:]) / (2 * h)
        G = np.where(np.isfinite(G), G, 0.0)
        gnorm2 = np.sum(G * G, axis=1)
        active = gnorm2 > 1e-24
        if not active.any():
            break
        accepted = np.zeros(len(X), dtype=bool)
        t = steps * 2
        for _ in range(60):
            trial = np.clip(X - t[:, None] * G, -radius, radius)
            tv = f.evaluate_many(trial)
            evals += len(trial)
            ok = active & ~accepted & np.isfinite(tv) & (tv <= vals - 1e-4 * t * gnorm2)
            X[ok] = trial[ok]
            vals[ok] = tv[ok]
            steps[ok] = t[ok]
            accepted |= ok
            pending = active & ~accepted
            if not pending.any():
                break
            t = np.where(pending, t * 0.5, t)
        if not accepted.any():
            break
    return X, vals, evals


def _polish(f: Polynomial, x, radius):
    res = minimize(lambda z: f(z), x, method="BFGS", options={"gtol": 1e-12, "maxiter": 200})
    z = np.clip(res.x, -radius, radius)
    return z, f(z), res.nfev


def _search(f, budget, radius, rng):
    n = f.nvars
    X = _grid_samples(n, budget // 2, radius, rng)
    vals = f.evaluate_many(X)
    vals = np.where(np.isfinite(vals), vals, np.inf)
    evals = len(X)
    order = np.lexsort((*X.T[::-1], vals))
    n_grid_starts = N_STARTS // 2
    starts = X[order[:n_grid_starts]]
    rand = rng.standard_normal((N_STARTS - len(starts), n)) * min(radius, 3.0)
    starts = np.clip(np.concatenate([starts, rand]), -radius, radius)
    best_i = order[0]
    best_x, best_v, method = X[best_i], float(vals[best_i]), "grid"

    D, dvals, de = _descend(f, starts, radius)
    evals += de
    for x, v in zip(D, dvals):
        if v < best_v or (v == best_v and tuple(x) < tuple(best_x)):
            best_x, best_v, method = x, float(v), "multistart-descent"
    z, v, ne = _polish(f, best_x, radius)
    evals += ne
    if v < best_v:
        best_x, best_v, method = z, float(v), "multistart-descent"
    return np.asarray(best_x, dtype=float), best_v, evals, method


def approx_min(f: Polynomial, budget: int = 20_000, box_radius: float = 10.0, seed: int = 0) -> SamplingReport:
    """Approximate the global minimum of ``f`` on a box.

    Combines signed log-grid sampling with 32 batched gradient descents
    (numerical gradients, backtracking, at most 500 steps each) and a final
    quasi-Newton polish. While the best point lands on the box boundary the
    search is repeated on a box ten times wider, up to radius 1e4.

    Returns
    -------
    SamplingReport
        ``best_value`` is ``f(best_point)``, an upper bound on the minimum.
    """
    if budget < 1000:
        raise ValueError("budget must be at least 1000")
    rng = np.random.default_rng(seed)
    x, v, evals, method = _search(f, budget, box_radius, rng)
    radius = box_radius
    while radius < MAX_RADIUS and np.max(np.abs(x)) >= 0.99 * radius:
        radius = min(10 * radius, MAX_RADIUS)
        x2, v2, e2, m2 = _search(f, budget, radius, rng)
        evals += e2
        if v2 < v:
            x, v, method = x2, v2, m2
    return SamplingReport(x, float(f(x)), evals, method, seed, radius)


def _check_points(f: Polynomial, samples: int, rng) -> np.ndarray:
    n = f.nvars
    deg = max(f.degree, 1)
    cap = 690.0 / deg  # keeps every monomial inside the double range
    # mixture of log-scales: narrow wells near |x| = 1 and heavy tails
    widths = rng.choice([0.05, 0.3, 2.0], size=(samples, 1))
    logs = np.clip(rng.standard_normal((samples, n)) * widths, -cap, cap)
    signs = rng.choice([-1.0, 1.0], size=(samples, n))
    X = signs * np.exp(logs)
    grid = _grid_samples(n, min(samples, 4096), min(10.0, math.exp(cap)), rng)
    return np.concatenate([X, grid])


def lower_bound_violation(f: Polynomial, r: float, samples: int = 10_000, seed: int = 0) -> float:
    """Largest ``r - f(x)`` over the sample, after discounting rounding error."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    X = _check_points(f, samples, rng)
    vals = f.evaluate_many(X)
    slack = 4 * np.finfo(float).eps * f.term_magnitudes(X)
    gap = (r - vals) - slack
    gap = gap[np.isfinite(gap)]
    return float(gap.max()) if gap.size else -math.inf


def check_lower_bound(f: Polynomial, r: float, samples: int = 10_000, seed: int = 0) -> bool:
    """True when ``f(x) >= r - 1e-6`` at every heavy-tailed random and grid sample."""
    return lower_bound_violation(f, r, samples, seed) <= CHECK_TOL
