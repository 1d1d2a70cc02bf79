"""The geometric program whose optimum gives the SONC lower bound ``f_gp``.

For every non-square term ``alpha`` and every vertex ``j >= 1`` it touches
there is a variable ``a[alpha, j]``: the share of the vertex coefficient
``f_{alpha(j)}`` given to the circuit of ``alpha``. The constant share is
eliminated in closed form, which leaves

    minimize   sum_{lambda_0 > 0} lambda_0 |f_a|^(1/lambda_0) prod_j (lambda_j / a_j)^(lambda_j / lambda_0)
    subject to sum_alpha a[alpha, j] / f_{alpha(j)} <= 1                for each vertex j
               |f_a| prod_j (lambda_j / a_j)^lambda_j <= 1              for each alpha with lambda_0 = 0

and ``f_gp = f_0 - m*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .certify import SoncCertificate, certificate_from_gp
from .errors import AssumptionError, InfeasibleSolution, SolverError
from .geometry import SupportProfile, build_profile
from .gpsolve import GeometricProgram, GpSolution, Monomial, Posynomial, solve_gp
from .poly import Polynomial

__all__ = ["BoundResult", "GpLayout", "build_gp", "lower_bound", "closed_form_single_circuit"]


def _log(q) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass
class GpLayout:
    """A geometric program together with the meaning of its variables."""

    gp: GeometricProgram | None
    keys: list  # (alpha, j) per variable
    has_objective: bool

    @property
    def nvars(self) -> int:
        return len(self.keys)


@dataclass
class BoundResult:
    """Outcome of :func:`lower_bound`.

    ``f_gp`` is ``None`` when the program has no feasible point (then no
    SONC bound with this Newton simplex exists).
    """

    f_gp: float | None
    m_star: float | None
    a_star: dict
    solver: GpSolution | None
    certificate: SoncCertificate | None
    profile: SupportProfile
    status: str = "optimal"
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def build_gp(profile: SupportProfile, f: Polynomial) -> GpLayout:
    """Assemble the program for ``f``; ``gp`` is ``None`` when Delta(f) is empty."""
    keys = []
    index = {}
    for alpha in profile.delta:
        for j in profile.active(alpha):
            index[(alpha, j)] = len(keys)
            keys.append((alpha, j))
    if not keys and not profile.delta:
        return GpLayout(None, [], False)

    objective = []
    inequalities = []
    for alpha in profile.delta:
        lam = profile.lambdas[alpha]
        log_f = _log(abs(f.coeff(alpha)))
        act = profile.active(alpha)
        if lam[0] > 0:
            l0 = float(lam[0])
            log_c = _log(lam[0]) + log_f / l0 + sum(float(lam[j]) * _log(lam[j]) for j in act) / l0
            exps = {index[(alpha, j)]: -float(lam[j] / lam[0]) for j in act}
            objective.append(Monomial(log_c, exps))
        else:
            log_c = log_f + sum(float(lam[j]) * _log(lam[j]) for j in act)
            exps = {index[(alpha, j)]: -float(lam[j]) for j in act}
            inequalities.append(Posynomial([Monomial(log_c, exps)]))
    for j in range(1, profile.n + 1):
        fj = f.coeff(profile.vertices[j])
        terms = [Monomial(-_log(fj), {index[(alpha, j)]: 1.0}) for alpha in profile.delta if (alpha, j) in index]
        if terms:
            inequalities.append(Posynomial(terms))

    has_objective = bool(objective)
    if not has_objective:
        objective = [Monomial(0.0, {})]  # pure feasibility problem
    names = [f"a[{','.join(map(str, alpha))}|{j}]" for alpha, j in keys]
    gp = GeometricProgram(Posynomial(objective), inequalities, [], max(1, len(keys)), names)
    return GpLayout(gp, keys, has_objective)


def lower_bound(f: Polynomial, tol: float = 1e-9, max_iter: int = 200, mediated: bool = False) -> BoundResult:
    """Compute ``f_gp`` for a polynomial with a simplex Newton polytope.

    Parameters
    ----------
    f : Polynomial
    tol : float
        Duality-gap tolerance handed to the GP solver.
    max_iter : int
        Newton step budget of the solver.
    mediated : bool
        Also classify each circuit of the certificate against the maximal
        mediated set of its simplex (slower on large simplices).

    Returns
    -------
    BoundResult
        With ``status`` ``optimal`` the certificate proves ``f >= f_gp``.

    Raises
    ------
    AssumptionError
        When the Newton polytope is not a simplex with even vertices and
        positive vertex coefficients.
    """
    profile = build_profile(f)
    layout = build_gp(profile, f)
    f0 = float(f.constant)
    if layout.gp is None:
        cert = certificate_from_gp(profile, f, {}, mediated=mediated)
        return BoundResult(f0, 0.0, {}, None, cert, profile)

    sol = solve_gp(layout.gp, tol=tol, max_iter=max_iter)
    a_star = {key: float(sol.z[i]) for i, key in enumerate(layout.keys)}
    if sol.status != "optimal":
        return BoundResult(None, None, a_star, sol, None, profile, status=sol.status)
    try:
        cert = certificate_from_gp(profile, f, a_star, mediated=mediated)
    except InfeasibleSolution as exc:
        return BoundResult(None, None, a_star, sol, None, profile, status="infeasible", notes=[str(exc)])
    f_gp = float(cert.r)
    return BoundResult(f_gp, f0 - f_gp, a_star, sol, cert, profile)


def closed_form_single_circuit(profile: SupportProfile, f: Polynomial) -> float:
    """``f_gp`` when the only non-square term is interior to the constant face.

    With one term ``alpha`` the vertex budgets are tight at the optimum, so
    ``f_gp = f_0 - lambda_0 |f_a|^(1/lambda_0) prod_j (lambda_j / f_{alpha(j)})^(lambda_j/lambda_0)``.
    """
    if len(profile.delta) != 1:
        raise AssumptionError(f"expected exactly one non-square term, found {len(profile.delta)}")
    alpha = profile.delta[0]
    if f.coeff(alpha) == 0 or not set(f.terms) <= set(profile.vertices) | set(profile.omega):
        raise AssumptionError("the polynomial does not match the profile")
    lam = profile.lambdas[alpha]
    if lam[0] == 0:
        raise AssumptionError("the non-square term lies on the face opposite the constant")
    l0 = float(lam[0])
    s = _log(lam[0]) + _log(abs(f.coeff(alpha))) / l0
    for j in profile.active(alpha):
        s += float(lam[j]) / l0 * (_log(lam[j]) - _log(f.coeff(profile.vertices[j])))
    return float(f.constant) - math.exp(s)
