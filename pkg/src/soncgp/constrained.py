"""Lower bounds over basic semialgebraic sets ``K = {x : g_i(x) >= 0}``.

For ``mu > 0`` the polynomial ``h(mu) = f - sum mu_i g_i`` satisfies
``h(mu) <= f`` on ``K``, so every SONC bound of ``h(mu)`` bounds ``f`` on ``K``. When the constraint data have the right signs,
the best such bound over all ``mu`` is again a geometric program in the joint
variables ``(a, mu)``; otherwise ``mu`` is searched directly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import AssumptionError, InnerInfeasible, NonpositiveMu, SoncError, StructureMismatch
from .geometry import SupportProfile, build_profile, is_even
from .gpbuild import BoundResult, lower_bound
from .gpsolve import GeometricProgram, GpSolution, Monomial, Posynomial, solve_gp
from .poly import Polynomial, as_fraction

__all__ = [
    "ConstrainedProblem",
    "ConstrainedResult",
    "SupportChangeWarning",
    "build_h",
    "classify_program",
    "constrained_bound",
]

MU_LOG10_RANGE = (-3.0, 3.0)
GRID_POINTS = 25
SEARCH_ROUNDS = 3
GOLDEN_TOL = 1e-3  # in log10(mu)
INV_PHI = (math.sqrt(5) - 1) / 2


class SupportChangeWarning(UserWarning):
    """A coefficient of ``h(mu)`` cancels, so its support is smaller than the shared one."""


def _log(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass
class ConstrainedProblem:
    """``min f(x)`` subject to ``g_i(x) >= 0``.

    ``shared_profile`` describes the simplex spanned by the union of all
    supports: the support of ``h(mu)`` for generic ``mu``.
    """

    objective: Polynomial
    constraints: list[Polynomial] = field(default_factory=list)

    def __post_init__(self):
        self.constraints = list(self.constraints)
        for g in self.constraints:
            if g.nvars != self.objective.nvars:
                raise StructureMismatch("constraints must live in the same variables as the objective")
        union = {e: Fraction(1) for p in [self.objective, *self.constraints] for e in p.terms}
        self.shared_profile = _geometry(Polynomial(self.objective.nvars, union))

    @property
    def nvars(self) -> int:
        return self.objective.nvars

    @property
    def s(self) -> int:
        return len(self.constraints)

    def coefficient_signs(self, alpha) -> set[int]:
        """Signs of the contributions ``f_a`` and ``-g_{i,a}`` to ``h(mu)_a``."""
        parts = [self.objective.coeff(alpha)] + [-g.coeff(alpha) for g in self.constraints]
        return {1 if c > 0 else -1 for c in parts if c != 0}


def _geometry(union: Polynomial) -> SupportProfile:
    # positive coefficients everywhere: only the shape of the support matters here
    return build_profile(union)


def build_h(problem: ConstrainedProblem, mu: Sequence[float]) -> Polynomial:
    """``h(mu) = f - sum mu_i g_i``; warns with :class:`SupportChangeWarning` on cancellation."""
    mu = [as_fraction(m) for m in mu]
    if len(mu) != problem.s:
        raise StructureMismatch(f"expected {problem.s} multipliers, got {len(mu)}")
    if any(m <= 0 for m in mu):
        raise NonpositiveMu("all multipliers must be strictly positive")
    terms = dict(problem.objective.terms)
    for m, g in zip(mu, problem.constraints):
        for e, c in g.terms.items():
            terms[e] = terms.get(e, Fraction(0)) - m * c
    h = Polynomial(problem.nvars, terms)
    expected = set(problem.objective.terms).union(*(g.terms for g in problem.constraints))
    if set(h.terms) != expected:
        warnings.warn("h(mu) lost support terms through cancellation", SupportChangeWarning, stacklevel=2)
    return h


def _sign_constant(problem: ConstrainedProblem) -> bool:
    prof = problem.shared_profile
    return all(len(problem.coefficient_signs(a)) <= 1 for a in prof.omega)


def classify_program(problem: ConstrainedProblem) -> str:
    """``geometric`` when the joint program in ``(a, mu)`` is a GP, else ``signomial``.

    Needs ``g_i(0) >= 0``, ``g_i`` nonnegative at every nonzero vertex, ``f``
    positive there, and a fixed sign of ``h(mu)_a`` for every other term.
    """
    prof = problem.shared_profile
    if any(g.constant < 0 for g in problem.constraints):
        return "signomial"
    for v in prof.vertices[1:]:
        if problem.objective.coeff(v) <= 0 or any(g.coeff(v) < 0 for g in problem.constraints):
            return "signomial"
    if not _sign_constant(problem):
        return "signomial"
    return "geometric"


@dataclass
class ConstrainedResult:
    """``bound`` is a lower bound of ``f`` on ``K`` (``None`` when none was found)."""

    bound: float | None
    mu: tuple[float, ...]
    method: str  # unconstrained | geometric | signomial
    status: str
    evaluations: int = 0
    inner: BoundResult | None = None
    solver: GpSolution | None = None
    notes: list = field(default_factory=list)

    def __float__(self):
        return float("-inf") if self.bound is None else float(self.bound)


def constrained_bound(problem: ConstrainedProblem, tol: float = 1e-9, max_iter: int = 200) -> ConstrainedResult:
    """Best SONC bound of ``f`` on ``K`` reachable through ``h(mu)``.

    Geometric problems are solved as one GP; the others by coordinate search
    over ``log10(mu)`` on ``[-3, 3]`` (25-point grid per axis followed by a
    golden-section refinement, up to 3 rounds), keeping the best certified
    ``h(mu)_gp``.

    Raises
    ------
    InnerInfeasible
        When no sampled ``mu`` yields a bound.
    """
    if problem.s == 0:
        res = lower_bound(problem.objective, tol=tol, max_iter=max_iter)
        return ConstrainedResult(res.f_gp, (), "unconstrained", res.status, 1, res, res.solver)
    if classify_program(problem) == "geometric":
        out = _geometric_bound(problem, tol, max_iter)
        if out.status == "optimal":
            return out
    return _mu_search(problem, tol, max_iter)


# ---------------------------------------------------------------------------
# joint geometric program


def _geometric_bound(problem: ConstrainedProblem, tol, max_iter) -> ConstrainedResult:
    prof = problem.shared_profile
    f, gs = problem.objective, problem.constraints
    delta = [a for a in prof.omega if not is_even(a) or problem.coefficient_signs(a) == {-1}]

    keys = []
    index = {}
    for alpha in delta:
        for j in prof.active(alpha):
            index[(alpha, j)] = len(keys)
            keys.append(("a", alpha, j))
    mu_idx = []
    for i in range(problem.s):
        mu_idx.append(len(keys))
        keys.append(("mu", i))
    t_idx = {}
    for alpha in delta:
        t_idx[alpha] = len(keys)
        keys.append(("t", alpha))

    objective, ineq = [], []
    for i, g in enumerate(gs):
        if g.constant > 0:
            objective.append(Monomial(_log(g.constant), {mu_idx[i]: 1.0}))
    for alpha in delta:
        lam = prof.lambdas[alpha]
        act = prof.active(alpha)
        # t_alpha >= |f_a| + sum mu_i |g_{i,a}|, i.e. |h(mu)_a| <= t_alpha
        bound_terms = []
        if f.coeff(alpha) != 0:
            bound_terms.append(Monomial(_log(abs(f.coeff(alpha))), {t_idx[alpha]: -1.0}))
        for i, g in enumerate(gs):
            if g.coeff(alpha) != 0:
                bound_terms.append(Monomial(_log(abs(g.coeff(alpha))), {mu_idx[i]: 1.0, t_idx[alpha]: -1.0}))
        ineq.append(Posynomial(bound_terms))
        if lam[0] > 0:
            l0 = float(lam[0])
            log_c = _log(lam[0]) + sum(float(lam[j]) * _log(lam[j]) for j in act) / l0
            exps = {index[(alpha, j)]: -float(lam[j] / lam[0]) for j in act}
            exps[t_idx[alpha]] = 1.0 / l0
            objective.append(Monomial(log_c, exps))
        else:
            log_c = sum(float(lam[j]) * _log(lam[j]) for j in act)
            exps = {index[(alpha, j)]: -float(lam[j]) for j in act}
            exps[t_idx[alpha]] = 1.0
            ineq.append(Posynomial([Monomial(log_c, exps)]))
    for j in range(1, prof.n + 1):
        v = prof.vertices[j]
        fj = f.coeff(v)
        terms = [Monomial(-_log(fj), {index[(alpha, j)]: 1.0}) for alpha in delta if (alpha, j) in index]
        for i, g in enumerate(gs):
            if g.coeff(v) > 0:
                terms.append(Monomial(_log(g.coeff(v)) - _log(fj), {mu_idx[i]: 1.0}))
        if terms:
            ineq.append(Posynomial(terms))
    if not objective:
        objective = [Monomial(0.0, {})]
        feasibility_only = True
    else:
        feasibility_only = False

    gp = GeometricProgram(Posynomial(objective), ineq, [], len(keys))
    sol = solve_gp(gp, tol=tol, max_iter=max_iter)
    mu = tuple(float(sol.z[i]) for i in mu_idx)
    if sol.status != "optimal":
        return ConstrainedResult(None, mu, "geometric", sol.status, 1, None, sol)
    gamma = 0.0 if feasibility_only else sol.objective_value
    bound = float(f.constant) - gamma
    inner = None
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SupportChangeWarning)
            inner = lower_bound(build_h(problem, mu), tol=tol, max_iter=max_iter)
    except SoncError:
        pass
    if inner is not None and inner.ok and inner.f_gp is not None:
        # both are valid; the inner one carries a certificate
        bound = max(bound, inner.f_gp) if inner.f_gp <= bound + 1e-6 * (1 + abs(bound)) else bound
    return ConstrainedResult(bound, mu, "geometric", "optimal", 1, inner, sol)


# ---------------------------------------------------------------------------
# search over mu


class _Evaluator:
    def __init__(self, problem, tol, max_iter):
        self.problem = problem
        self.tol = tol
        self.max_iter = max_iter
        self.cache = {}

    def __call__(self, logmu) -> float:
        key = tuple(round(float(v), 12) for v in logmu)
        if key not in self.cache:
            self.cache[key] = self._inner(key)[0]
        return self.cache[key]

    def _inner(self, logmu):
        mu = [10.0 ** v for v in logmu]
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SupportChangeWarning)
                res = lower_bound(build_h(self.problem, mu), tol=self.tol, max_iter=self.max_iter)
        except (AssumptionError, SoncError, ValueError):
            return -math.inf, None
        if not res.ok or res.f_gp is None:
            return -math.inf, res
        return res.f_gp, res


def _better(val, pt, best_val, best_pt) -> bool:
    if val > best_val:
        return True
    return val == best_val and tuple(pt) < tuple(best_pt)


def _golden(fn, lo, hi):
    """Maximize a function of one variable on ``[lo, hi]``; returns (x, value)."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > GOLDEN_TOL:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fn(d)
    return (c, fc) if fc >= fd else (d, fd)


def _mu_search(problem: ConstrainedProblem, tol, max_iter) -> ConstrainedResult:
    ev = _Evaluator(problem, tol, max_iter)
    lo, hi = MU_LOG10_RANGE
    grid = np.linspace(lo, hi, GRID_POINTS)
    s = problem.s

    # start on the diagonal mu_1 = ... = mu_s
    best_pt, best_val = None, -math.inf
    for v in grid:
        pt = [float(v)] * s
        val = ev(pt)
        if best_pt is None or _better(val, pt, best_val, best_pt):
            best_pt, best_val = pt, val

    for _ in range(SEARCH_ROUNDS):
        start_val = best_val
        for i in range(s):
            def along(v, i=i, base=list(best_pt)):
                pt = list(base)
                pt[i] = float(v)
                return ev(pt)

            vals = [along(v) for v in grid]
            k = max(range(GRID_POINTS), key=lambda m: (vals[m], -m))
            cand = list(best_pt)
            cand[i] = float(grid[k])
            if _better(vals[k], cand, best_val, best_pt):
                best_pt, best_val = cand, vals[k]
            if math.isfinite(vals[k]):
                left = grid[max(k - 1, 0)]
                right = grid[min(k + 1, GRID_POINTS - 1)]
                x, val = _golden(along, float(left), float(right))
                cand = list(best_pt)
                cand[i] = x
                if _better(val, cand, best_val, best_pt):
                    best_pt, best_val = cand, val
        if best_val <= start_val + tol * (1 + abs(best_val)) or s == 1:
            break

    # the mu -> 0 limit: f >= f_gp(f) holds on all of R^n, hence on K
    try:
        limit = lower_bound(problem.objective, tol=tol, max_iter=max_iter)
    except SoncError:
        limit = None
    if limit is not None and limit.ok and limit.f_gp is not None and limit.f_gp > best_val:
        return ConstrainedResult(limit.f_gp, (0.0,) * s, "signomial", "optimal", len(ev.cache) + 1,
                                 limit, limit.solver, ["supremum approached as mu -> 0"])

    mu = tuple(10.0 ** v for v in best_pt)
    if not math.isfinite(best_val):
        raise InnerInfeasible("no multiplier on the search grid gives a SONC bound")
    _, inner = ev._inner(tuple(round(float(v), 12) for v in best_pt))
    return ConstrainedResult(best_val, mu, "signomial", "optimal", len(ev.cache), inner, inner.solver if inner else None)
