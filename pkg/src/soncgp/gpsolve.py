"""Geometric programs and a log-space barrier interior point solver.

A GP minimizes a posynomial subject to posynomial <= 1 and monomial == 1
constraints over positive variables ``z``. With ``z = exp(y)`` every
posynomial becomes ``exp`` of a log-sum-exp of affine functions, so

    minimize  F0(y)  s.t.  Fi(y) <= 0,  a_j . y + log c_j = 0,

is convex, with ``F = log(posynomial)``. Equalities are eliminated by a
nullspace parametrization ``y = y0 + N w``. The inequalities enter the log
barrier as ``-log(1 - p_i(exp(y)))``, i.e. through the convex functions
``exp(Fi) - 1``: unlike ``-log(-Fi)`` this stays bounded when a constraint
becomes very slack, so centering is well posed on unbounded feasible sets.

Monomial coefficients are stored as logarithms so that coefficients far
outside the double range are still representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import null_space

__all__ = [
    "Monomial",
    "Posynomial",
    "GeometricProgram",
    "GpSolution",
    "solve_gp",
    "eval_posynomial",
    "log_posynomial",
    "dump_gp",
]

# barrier schedule: t = 1/mu, mu <- mu / 10 starting from mu = 1
T_INIT = 1.0
T_GROWTH = 10.0
NEWTON_TOL = 1e-10
ARMIJO = 0.01
SHRINK = 0.5
# exp(-690) is at the bottom of the double range: the objective went to 0
UNBOUNDED_LOG = -690.0
# Phase I optimum below this is treated as "feasible with an empty interior"
FEAS_TOL = 1e-8


@dataclass(frozen=True)
class Monomial:
    """``exp(log_coeff) * prod z_i ** exponents[i]``."""

    log_coeff: float
    exponents: Mapping[int, float] = field(default_factory=dict)

    @classmethod
    def from_coeff(cls, coeff: float, exponents: Mapping[int, float] | None = None) -> "Monomial":
        if not coeff > 0:
            raise ValueError(f"monomial coefficient must be positive, got {coeff}")
        return cls(math.log(coeff), dict(exponents or {}))

    @property
    def coeff(self) -> float:
        return math.exp(self.log_coeff) if self.log_coeff < 709 else math.inf

    def __post_init__(self):
        if not math.isfinite(self.log_coeff):
            raise ValueError("monomial log-coefficient must be finite")
        clean = {int(k): float(v) for k, v in self.exponents.items() if v != 0}
        object.__setattr__(self, "exponents", clean)


@dataclass(frozen=True)
class Posynomial:
    terms: tuple[Monomial, ...]

    def __init__(self, terms: Sequence[Monomial]):
        terms = tuple(terms)
        if not terms:
            raise ValueError("a posynomial needs at least one term")
        object.__setattr__(self, "terms", terms)

    def matrices(self, nvars: int) -> tuple[np.ndarray, np.ndarray]:
        """Exponent matrix ``A`` (terms x nvars) and log-coefficients ``b``."""
        A = np.zeros((len(self.terms), nvars))
        for i, t in enumerate(self.terms):
            for k, v in t.exponents.items():
                A[i, k] = v
        b = np.array([t.log_coeff for t in self.terms])
        return A, b

    def variables(self) -> set[int]:
        return {k for t in self.terms for k in t.exponents}


@dataclass
class GeometricProgram:
    objective: Posynomial
    ineq_constraints: list[Posynomial]
    eq_constraints: list[Monomial]
    nvars: int
    var_names: list[str] | None = None

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("a geometric program needs at least one variable")
        used = set(self.objective.variables())
        for p in self.ineq_constraints:
            used |= p.variables()
        for q in self.eq_constraints:
            used |= set(q.exponents)
        if used and (min(used) < 0 or max(used) >= self.nvars):
            raise ValueError("variable index out of range")


@dataclass
class GpSolution:
    status: str  # optimal | infeasible | unbounded | max_iter
    z: np.ndarray
    objective_value: float
    duality_gap_estimate: float
    iterations: int
    log_objective: float = math.nan
    max_violation: float = math.nan  # max over constraints of log(p_i(z)), <= 0 when feasible

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


# ---------------------------------------------------------------------------
# log-sum-exp pieces


def logsumexp(u) -> float:
    # scipy.special.logsumexp costs ~30x more on the short vectors used here
    m = float(np.max(u))
    if not math.isfinite(m):
        return m
    return m + math.log(float(np.sum(np.exp(u - m))))


class _LSE:
    """``F(x) = logsumexp(A (y0 + N x) + b)`` with gradient and Hessian in x."""

    def __init__(self, A, b, y0, N):
        self.M = A @ N
        self.c = A @ y0 + b

    def __call__(self, x, order=2):
        u = self.M @ x + self.c
        val = logsumexp(u)
        if order == 0:
            return val
        p = np.exp(u - val)
        g = self.M.T @ p
        if order == 1:
            return val, g
        H = (self.M.T * p) @ self.M - np.outer(g, g)
        return val, g, H


class _Affine:
    def __init__(self, g, c):
        self.g = np.asarray(g, dtype=float)
        self.c = float(c)

    def __call__(self, x, order=2):
        val = float(self.g @ x + self.c)
        if order == 0:
            return val
        if order == 1:
            return val, self.g
        return val, self.g, np.zeros((len(x), len(x)))


class _ExpMinusOne:
    """``exp(F(x)) - 1``: convex whenever F is, and bounded below by -1."""

    def __init__(self, F):
        self.F = F

    def __call__(self, x, order=2):
        if order == 0:
            v = self.F(x, 0)
            return math.expm1(v) if v < 700 else math.inf
        if order == 1:
            v, g = self.F(x, 1)
            e = math.exp(v)
            return math.expm1(v), e * g
        v, g, H = self.F(x, 2)
        e = math.exp(v)
        return math.expm1(v), e * g, e * (H + np.outer(g, g))


class _Lifted:
    """``F(x[:-1]) - x[-1]``: Phase I constraint in the variables (x, s)."""

    def __init__(self, F):
        self.F = F

    def __call__(self, xs, order=2):
        x = xs[:-1]
        if order == 0:
            return self.F(x, 0) - xs[-1]
        if order == 1:
            v, g = self.F(x, 1)
            return v - xs[-1], np.append(g, -1.0)
        v, g, H = self.F(x, 2)
        k = len(xs)
        HH = np.zeros((k, k))
        HH[:-1, :-1] = H
        return v - xs[-1], np.append(g, -1.0), HH


def log_posynomial(p: Posynomial, y, nvars: int | None = None, order: int = 1):
    """``log p(exp(y))`` and, for ``order >= 1``, its gradient (and Hessian) in y."""
    y = np.asarray(y, dtype=float)
    n = nvars if nvars is not None else len(y)
    A, b = p.matrices(n)
    return _LSE(A, b, np.zeros(n), np.eye(n))(y, order)


def eval_posynomial(p: Posynomial, z) -> float:
    """Value of ``p`` at the positive point ``z``, summed in log space."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise ValueError("posynomials are only defined for positive arguments")
    A, b = p.matrices(len(z))
    return float(np.exp(logsumexp(A @ np.log(z) + b)))


# ---------------------------------------------------------------------------
# barrier method


class _IterationLimit(Exception):
    pass


class _Unbounded(Exception):
    pass


class _Counter:
    def __init__(self, limit):
        self.limit = limit
        self.count = 0

    def tick(self):
        self.count += 1
        if self.count > self.limit:
            raise _IterationLimit


def _newton_solve(H, g):
    n = len(g)
    scale = max(1.0, float(np.max(np.abs(H)))) if n else 1.0
    try:
        return np.linalg.solve(H + 1e-14 * scale * np.eye(n), -g)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(H + 1e-10 * scale * np.eye(n), -g, rcond=None)[0]


def _center(obj, cons, x, t, counter, watch=None):
    """Minimize ``t obj(x) - sum log(-c(x))`` from a strictly feasible ``x``."""

    def phi(z):
        vals = [c(z, 0) for c in cons]
        if any(v >= 0 or not math.isfinite(v) for v in vals):
            return math.inf
        return t * obj(z, 0) - sum(math.log(-v) for v in vals)

    while True:
        f0, g0, H0 = obj(x, 2)
        g = t * g0
        H = t * H0
        for c in cons:
            v, gc, Hc = c(x, 2)
            g = g - gc / v
            H = H - Hc / v + np.outer(gc, gc) / (v * v)
        dx = _newton_solve(H, g)
        dec2 = float(-g @ dx)
        # decrement measured in units of obj, where the suboptimality lives
        if not math.isfinite(dec2) or dec2 / (2 * t) <= NEWTON_TOL:
            return x
        counter.tick()
        cur = phi(x)
        step = 1.0
        slope = float(g @ dx)
        while True:
            trial = x + step * dx
            val = phi(trial)
            if val <= cur + ARMIJO * step * slope:
                break
            step *= SHRINK
            if step < 1e-20:
                return x
        x = trial
        if watch is not None:
            watch(x)


def _barrier(obj, cons, x, tol, counter, stop=None, watch=None):
    """Path following: returns (x, gap_estimate)."""
    m = len(cons)
    if m == 0:
        x = _center(obj, [], x, 1.0, counter, watch)
        return x, 0.0
    t = T_INIT
    while True:
        x = _center(obj, cons, x, t, counter, watch)
        if stop is not None and stop(x):
            return x, m / t
        if m / t < tol:
            return x, m / t
        t *= T_GROWTH


def _equality_chart(gp):
    n = gp.nvars
    if not gp.eq_constraints:
        return np.zeros(n), np.eye(n), True
    Aeq = np.zeros((len(gp.eq_constraints), n))
    beq = np.zeros(len(gp.eq_constraints))
    for j, q in enumerate(gp.eq_constraints):
        for k, v in q.exponents.items():
            Aeq[j, k] = v
        beq[j] = -q.log_coeff
    y0 = np.linalg.lstsq(Aeq, beq, rcond=None)[0]
    consistent = np.linalg.norm(Aeq @ y0 - beq) <= 1e-9 * (1 + np.linalg.norm(beq))
    return y0, null_space(Aeq), consistent


def solve_gp(gp: GeometricProgram, tol: float = 1e-9, max_iter: int = 200) -> GpSolution:
    """Solve a geometric program with a barrier method in log space.

    Parameters
    ----------
    gp : GeometricProgram
    tol : float
        Target duality gap of the log-objective, so roughly the relative
        accuracy of the optimal value.
    max_iter : int
        Cap on the total number of Newton steps (Phase I included).

    Returns
    -------
    GpSolution
        ``status`` is one of ``optimal``, ``infeasible``, ``unbounded`` or
        ``max_iter``. Iterates stay strictly feasible, except when the feasible
        set has an empty interior: then constraints hold to within ``1e-8``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    n = gp.nvars
    y0, N, consistent = _equality_chart(gp)
    if not consistent:
        return _failed("infeasible", y0, gp, 0)

    Ao, bo = gp.objective.matrices(n)
    obj = _LSE(Ao, bo, y0, N)
    mats = [p.matrices(n) for p in gp.ineq_constraints]
    cons = [_LSE(A, b, y0, N) for A, b in mats]
    k = N.shape[1]
    x = np.zeros(k)
    counter = _Counter(max_iter)

    last = {"x": x}

    def watch(xx):
        last["x"] = xx
        if obj(xx, 0) < UNBOUNDED_LOG:
            raise _Unbounded

    try:
        if k == 0:
            worst = max((c(x, 0) for c in cons), default=-math.inf)
            status = "optimal" if worst <= FEAS_TOL else "infeasible"
            return _solution(status, x, y0, N, gp, 0.0, 0, mats)

        worst = max((c(x, 0) for c in cons), default=-math.inf)
        if worst >= 0:
            x, shift = _phase_one(cons, x, worst, counter)
            if shift is None:
                return _solution("infeasible", x, y0, N, gp, math.inf, counter.count, mats)
            if shift > 0:
                # feasible set has no interior: loosen every constraint by `shift`
                cons = [_Shifted(c, shift) for c in cons]
            last["x"] = x
        x, gap = _barrier(obj, [_ExpMinusOne(c) for c in cons], x, tol, counter, watch=watch)
    except _IterationLimit:
        return _solution("max_iter", last["x"], y0, N, gp, math.inf, counter.count, mats)
    except _Unbounded:
        return _solution("unbounded", last["x"], y0, N, gp, math.inf, counter.count, mats)
    return _solution("optimal", x, y0, N, gp, gap, counter.count, mats)


class _Shifted:
    def __init__(self, F, shift):
        self.F = F
        self.shift = shift

    def __call__(self, x, order=2):
        out = self.F(x, order)
        if order == 0:
            return out - self.shift
        return (out[0] - self.shift,) + tuple(out[1:])


def _phase_one(cons, x, worst, counter):
    """Minimize the largest constraint value. Returns (x, shift).

    ``shift`` is 0 for a strictly feasible point, a small positive loosening
    when the optimum sits at the boundary, and None when infeasible.
    """
    xs = np.append(x, worst + 1.0)
    lifted = [_Lifted(c) for c in cons]
    floor = _Affine(np.append(np.zeros(len(x)), -1.0), -1.0)  # s >= -1
    obj = _Affine(np.append(np.zeros(len(x)), 1.0), 0.0)

    def strictly_feasible(v):
        return v[-1] < 0

    barrier_cons = [_ExpMinusOne(c) for c in lifted] + [floor]
    xs, _ = _barrier(obj, barrier_cons, xs, 1e-10, counter, stop=strictly_feasible)
    x = xs[:-1]
    best = max(c(x, 0) for c in cons)
    if best < 0:
        return x, 0.0
    if best <= FEAS_TOL:
        return x, best + 1e-12 + 1e-3 * FEAS_TOL
    return x, None


def _failed(status, y0, gp, iters):
    z = np.exp(y0)
    return GpSolution(status, z, math.nan, math.inf, iters)


def _solution(status, x, y0, N, gp, gap, iters, mats):
    y = y0 + N @ x
    Ao, bo = gp.objective.matrices(gp.nvars)
    logobj = float(logsumexp(Ao @ y + bo))
    viol = max((float(logsumexp(A @ y + b)) for A, b in mats), default=-math.inf)
    if gp.eq_constraints:
        for q in gp.eq_constraints:
            r = abs(q.log_coeff + sum(v * y[k] for k, v in q.exponents.items()))
            viol = max(viol, r)
    with np.errstate(over="ignore"):
        z = np.exp(y)
        value = float(np.exp(logobj))
    return GpSolution(status, z, value, gap, iters, logobj, viol)


# ---------------------------------------------------------------------------
# text dump


def _fmt_mono(m: Monomial, names) -> str:
    coeff = m.coeff
    head = f"{coeff:.17g}" if math.isfinite(coeff) and coeff > 1e-300 else f"(exp {m.log_coeff:.17g})"
    parts = [head] + [f"(^ {names[k]} {v:.17g})" for k, v in sorted(m.exponents.items())]
    return "(* " + " ".join(parts) + ")" if len(parts) > 1 else head


def _fmt_posy(p: Posynomial, names) -> str:
    if len(p.terms) == 1:
        return _fmt_mono(p.terms[0], names)
    return "(+ " + " ".join(_fmt_mono(t, names) for t in p.terms) + ")"


def dump_gp(gp: GeometricProgram) -> str:
    """S-expression dump: ``(min P) (st (<= P 1))* ((= M 1))*``, one form per line."""
    names = gp.var_names or [f"z{i}" for i in range(gp.nvars)]
    lines = [f"(min {_fmt_posy(gp.objective, names)})"]
    lines += [f"(st (<= {_fmt_posy(p, names)} 1))" for p in gp.ineq_constraints]
    lines += [f"((= {_fmt_mono(q, names)} 1))" for q in gp.eq_constraints]
    return "\n".join(lines)
