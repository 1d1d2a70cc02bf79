"""Circuit polynomials, coefficient criteria and SONC certificates.

A circuit polynomial has even simplex vertices with positive coefficients and
one more term ``c x^beta`` with ``beta`` inside the simplex. It is nonnegative
iff ``|c|`` is at most its circuit number (or ``c >= -theta`` when ``beta`` is
even). Summing such circuits, one per non-square term of ``f``, gives the
certificates produced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import InfeasibleSolution, StructureMismatch
from .geometry import Exponent, SupportProfile, barycentric, is_even
from .mediated import MediatedSet, cached_mediated_set
from .poly import Polynomial, as_fraction

__all__ = [
    "CircuitPolynomial",
    "SoncCertificate",
    "circuit_number",
    "circuit_nonneg",
    "classify_circuit",
    "verify_theorem31",
    "verify_theorem32",
    "constant_weight",
    "certificate_from_gp",
]

REL_TOL = 1e-12
ABS_TOL = 1e-9  # used instead of REL_TOL when the circuit number is tiny
VERIFY_TOL = 1e-9


@dataclass(frozen=True)
class CircuitPolynomial:
    """``sum_j b_j x^{vertices[j]} + c x^beta`` with ``beta`` in ``conv(vertices)``."""

    vertices: tuple[Exponent, ...]
    vertex_coeffs: tuple[Fraction, ...]
    beta: Exponent
    c: Fraction
    lambdas: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        verts = tuple(tuple(int(x) for x in v) for v in self.vertices)
        coeffs = tuple(as_fraction(b) for b in self.vertex_coeffs)
        beta = tuple(int(x) for x in self.beta)
        c = as_fraction(self.c)
        if len(verts) != len(coeffs):
            raise ValueError("one coefficient per vertex is required")
        if any(b <= 0 for b in coeffs):
            raise ValueError("vertex coefficients must be positive")
        if not all(is_even(v) for v in verts):
            raise ValueError("circuit vertices must be even lattice points")
        if c == 0:
            raise ValueError("the inner coefficient must be nonzero")
        lam = barycentric(verts, beta)
        if lam is None or any(v < 0 for v in lam):
            raise ValueError(f"{beta} is not in the simplex spanned by {verts}")
        if self.lambdas and tuple(self.lambdas) != lam:
            raise ValueError("given barycentric coordinates do not match")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "vertex_coeffs", coeffs)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "lambdas", lam)

    @property
    def nvars(self) -> int:
        return len(self.beta)

    def to_polynomial(self) -> Polynomial:
        terms = dict(zip(self.vertices, self.vertex_coeffs))
        terms[self.beta] = terms.get(self.beta, Fraction(0)) + self.c
        return Polynomial(self.nvars, terms)

    @property
    def theta(self) -> float:
        return circuit_number(self)


def circuit_number(cp: CircuitPolynomial) -> float:
    """``prod_j (b_j / lambda_j) ** lambda_j`` over the vertices with positive weight."""
    s = 0.0
    for b, lam in zip(cp.vertex_coeffs, cp.lambdas):
        if lam > 0:
            s += float(lam) * (_log(b) - _log(lam))
    return math.exp(s)


def _log(q: Fraction) -> float:
    # math.log(Fraction) loses range for huge numerators/denominators
    return math.log(q.numerator) - math.log(q.denominator)


def _within(value: float, bound: float) -> bool:
    slack = REL_TOL * bound if bound >= 1e-3 else ABS_TOL
    return value <= bound + slack


def circuit_nonneg(cp: CircuitPolynomial) -> bool:
    theta = circuit_number(cp)
    c = float(cp.c)
    if is_even(cp.beta):
        return c >= 0 or _within(-c, theta)
    return _within(abs(c), theta)


def classify_circuit(cp: CircuitPolynomial, ms: MediatedSet | None = None) -> str:
    """One of ``not_nonnegative``, ``monomial_squares``, ``binomial_sos``, ``sonc_only``."""
    if cp.c > 0 and is_even(cp.beta):
        return "monomial_squares"
    if not circuit_nonneg(cp):
        return "not_nonnegative"
    if ms is None:
        ms = cached_mediated_set(cp.vertices)
    return "binomial_sos" if cp.beta in ms.pstar else "sonc_only"


# ---------------------------------------------------------------------------
# coefficient criteria


def _vertex_coeff(profile: SupportProfile, f: Polynomial, j: int) -> Fraction:
    return f.coeff(profile.vertices[j])


def _normalize_weights(profile, a, first_vertex):
    """Validate the keys of ``a`` and fill in zeros for vertices with zero weight."""
    n = profile.n
    delta = set(profile.delta)
    out = {}
    for key, val in a.items():
        alpha, j = key
        alpha = tuple(alpha)
        if alpha not in delta or not first_vertex <= j <= n:
            raise StructureMismatch(f"unexpected index {key}")
        if val < 0:
            raise ValueError(f"negative weight at {key}")
        out[(alpha, j)] = float(val)
    for alpha in profile.delta:
        lam = profile.lambdas[alpha]
        for j in range(first_vertex, n + 1):
            if (alpha, j) not in out:
                if lam[j] > 0:
                    raise StructureMismatch(f"missing weight for {(alpha, j)}")
                out[(alpha, j)] = 0.0
    return out


def _log_weighted(a_vals, lam, js):
    """``sum_j lambda_j log(a_j / lambda_j)`` over j in js with lambda_j > 0."""
    s = 0.0
    for j in js:
        if lam[j] > 0:
            if a_vals[j] <= 0:
                return -math.inf
            s += float(lam[j]) * (math.log(a_vals[j]) - _log(lam[j]))
    return s


def verify_theorem31(profile: SupportProfile, f: Polynomial, a: Mapping) -> bool:
    """Check ``|f_a| <= prod_{j>=0} (a_{a,j}/lambda_j)^lambda_j`` and the vertex budgets.

    ``a`` maps ``(alpha, j)`` for alpha in Delta(f) and ``j = 0..n`` to
    nonnegative weights; ``j = 0`` is the constant vertex.
    """
    w = _normalize_weights(profile, a, 0)
    n = profile.n
    for alpha in profile.delta:
        lam = profile.lambdas[alpha]
        vals = [w[(alpha, j)] for j in range(n + 1)]
        rhs = _log_weighted(vals, lam, range(n + 1))
        if _log(abs(f.coeff(alpha))) > rhs + math.log1p(VERIFY_TOL):
            return False
    for j in range(n + 1):
        total = sum(w[(alpha, j)] for alpha in profile.delta)
        budget = float(_vertex_coeff(profile, f, j))
        if total > budget + VERIFY_TOL * max(1.0, abs(budget)):
            return False
    return True


def constant_weight(profile: SupportProfile, f: Polynomial, alpha, a_vals) -> float:
    """Smallest constant-term weight making the circuit at ``alpha`` nonnegative.

    ``lambda_0 |f_a|^(1/lambda_0) prod_j (lambda_j / a_j)^(lambda_j/lambda_0)``,
    zero when ``lambda_0 = 0``. ``a_vals`` is indexed by vertex (entry 0 unused).
    """
    lam = profile.lambdas[tuple(alpha)]
    lam0 = lam[0]
    if lam0 == 0:
        return 0.0
    log_val = _log(lam0) + _log(abs(f.coeff(alpha))) / float(lam0)
    log_val -= _log_weighted(a_vals, lam, range(1, len(lam))) / float(lam0)
    return math.exp(log_val) if log_val < 709 else math.inf


def verify_theorem32(profile: SupportProfile, f: Polynomial, r, a: Mapping) -> bool:
    """Check the three conditions certifying that ``f - r`` is a SONC.

    ``a`` maps ``(alpha, j)``, alpha in Delta(f), ``j = 1..n``, to weights;
    entries for vertices with zero barycentric weight may be omitted.
    Comparisons allow a relative slack of 1e-9.
    """
    w = _normalize_weights(profile, a, 1)
    n = profile.n
    for alpha in profile.delta:
        lam = profile.lambdas[alpha]
        if lam[0] == 0:
            vals = [0.0] + [w[(alpha, j)] for j in range(1, n + 1)]
            rhs = _log_weighted(vals, lam, range(1, n + 1))
            if _log(abs(f.coeff(alpha))) > rhs + math.log1p(VERIFY_TOL):
                return False
    for j in range(1, n + 1):
        total = sum(w[(alpha, j)] for alpha in profile.delta)
        budget = float(_vertex_coeff(profile, f, j))
        if total > budget * (1 + VERIFY_TOL):
            return False
    logs = []
    for alpha in profile.delta_lt2d:
        vals = [0.0] + [w[(alpha, j)] for j in range(1, n + 1)]
        cw = constant_weight(profile, f, alpha, vals)
        if cw == math.inf:
            return False
        logs.append(math.log(cw) if cw > 0 else -math.inf)
    lhs = float(f.constant) - float(r)
    if not logs:
        return lhs >= -VERIFY_TOL * max(1.0, abs(float(f.constant)), abs(float(r)))
    if lhs <= 0:
        return False
    top = max(logs)
    total = top + math.log(sum(math.exp(v - top) for v in logs))
    return total <= math.log(lhs) + math.log1p(VERIFY_TOL)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class SoncCertificate:
    """``target - r == sum(circuits) + remainder``; the remainder is monomial squares."""

    r: Fraction
    circuits: list[tuple[CircuitPolynomial, str]]
    remainder: Polynomial
    target: Polynomial

    @property
    def shift(self) -> float:
        return float(self.r)

    def reconstruct(self) -> Polynomial:
        total = Polynomial(self.target.nvars, {(0,) * self.target.nvars: self.r})
        for cp, _ in self.circuits:
            total = total + cp.to_polynomial()
        return total + self.remainder

    def reconstruction_error(self) -> float:
        """Largest coefficient mismatch, measured in floating point."""
        diff = {}
        rec = self.reconstruct()
        for e in set(rec.terms) | set(self.target.terms):
            diff[e] = abs(float(rec.coeff(e)) - float(self.target.coeff(e)))
        return max(diff.values(), default=0.0)

    def remainder_is_monomial_squares(self) -> bool:
        return all(c > 0 and is_even(e) for e, c in self.remainder.terms.items())

    def is_valid(self, tol: float = 1e-8) -> bool:
        return (
            self.reconstruction_error() <= tol
            and self.remainder_is_monomial_squares()
            and all(circuit_nonneg(cp) for cp, _ in self.circuits)
        )

    def is_binomial_sos(self) -> bool:
        return all(status == "binomial-SOS" for _, status in self.circuits)

    def to_json(self) -> dict:
        return {
            "r": float(self.r),
            "circuits": [
                {
                    "vertices": [list(v) for v in cp.vertices],
                    "vertex_coeffs": [float(b) for b in cp.vertex_coeffs],
                    "beta": list(cp.beta),
                    "c": float(cp.c),
                    "theta": circuit_number(cp),
                    "status": status,
                }
                for cp, status in self.circuits
            ],
            "remainder": [
                {"exponent": list(e), "coeff": float(c)} for e, c in self.remainder.terms.items()
            ],
        }


def certificate_from_gp(profile: SupportProfile, f: Polynomial, a: Mapping, r=None,
                        mediated: bool = False) -> SoncCertificate:
    """Assemble the SONC decomposition of ``f - r`` from GP weights ``a``.

    One circuit per ``alpha`` in Delta(f): vertex coefficients ``a[alpha, j]``,
    constant from :func:`constant_weight`, inner term ``f_alpha x^alpha``.
    Unused vertex budget, the square terms of Omega(f) and any constant slack
    go into the remainder. With ``r=None`` the tightest shift is used.
    ``mediated=True`` tags circuits whose inner exponent lies in the maximal
    mediated set of their simplex as ``binomial-SOS``.

    Raises
    ------
    InfeasibleSolution
        If the weights do not satisfy the certificate conditions.
    """
    w = _normalize_weights(profile, a, 1)
    n = profile.n
    # exact arithmetic from here on, so that the reconstruction is exact
    wq = {k: Fraction(v) for k, v in w.items()}
    for j in range(1, n + 1):
        total = sum(wq[(alpha, j)] for alpha in profile.delta)
        budget = _vertex_coeff(profile, f, j)
        if total > budget:
            if float(total) > float(budget) * (1 + VERIFY_TOL):
                raise InfeasibleSolution(f"vertex {profile.vertices[j]} budget exceeded")
            factor = budget / total
            for alpha in profile.delta:
                wq[(alpha, j)] *= factor

    circuits = []
    const_used = Fraction(0)
    for alpha in profile.delta:
        lam = profile.lambdas[alpha]
        vals = [0.0] + [float(wq[(alpha, j)]) for j in range(1, n + 1)]
        verts, coeffs = [], []
        if lam[0] > 0:
            a0 = Fraction(constant_weight(profile, f, alpha, vals))
            const_used += a0
            verts.append(profile.vertices[0])
            coeffs.append(a0)
        for j in range(1, n + 1):
            if lam[j] > 0:
                verts.append(profile.vertices[j])
                coeffs.append(wq[(alpha, j)])
        try:
            cp = CircuitPolynomial(tuple(verts), tuple(coeffs), alpha, f.coeff(alpha))
        except ValueError as exc:
            raise InfeasibleSolution(str(exc)) from exc
        if not circuit_nonneg(cp):
            raise InfeasibleSolution(f"circuit at {alpha} is not nonnegative")
        status = "nonneg-circuit"
        if mediated and cp.beta in cached_mediated_set(cp.vertices).pstar:
            status = "binomial-SOS"
        circuits.append((cp, status))

    tight = f.constant - const_used
    if r is None:
        r_q = tight
    else:
        r_q = as_fraction(r)
        if r_q > tight:
            if float(r_q - tight) > VERIFY_TOL * max(1.0, abs(float(tight))):
                raise InfeasibleSolution(f"shift {float(r_q)} exceeds certified bound {float(tight)}")
            r_q = tight

    rem = {}
    for alpha in profile.omega:
        if alpha not in profile.delta:
            rem[alpha] = f.coeff(alpha)
    for j in range(1, n + 1):
        slack = _vertex_coeff(profile, f, j) - sum(wq[(alpha, j)] for alpha in profile.delta)
        if slack != 0:
            rem[profile.vertices[j]] = slack
    rem[profile.vertices[0]] = tight - r_q
    remainder = Polynomial(f.nvars, rem)
    return SoncCertificate(r_q, circuits, remainder, f)
