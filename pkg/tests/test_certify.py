import math
from decimal import Decimal, getcontext
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from soncgp import (
    CircuitPolynomial,
    InfeasibleSolution,
    StructureMismatch,
    approx_min,
    build_profile,
    certificate_from_gp,
    circuit_nonneg,
    circuit_number,
    classify_circuit,
    lower_bound,
    parse_polynomial,
    scale,
    verify_theorem31,
    verify_theorem32,
)
from soncgp.mediated import maximal_mediated_set

from strategies import seeds, single_circuit

THETA_SEC2 = 6 ** (1 / 6) * 4 ** (1 / 4)


def sec2_circuit(c):
    return CircuitPolynomial([(0, 0), (6, 0), (0, 4)], [F(7, 12), 1, 1], (1, 1), c)


def test_circuit_number_section_two():
    cp = sec2_circuit(-1)
    assert cp.lambdas == (F(7, 12), F(1, 6), F(1, 4))
    assert circuit_number(cp) == pytest.approx(THETA_SEC2, rel=1e-14)


def test_circuit_number_agiform_is_one():
    cp = CircuitPolynomial([(0, 0), (6, 0), (0, 4)], [F(7, 12), F(1, 6), F(1, 4)], (1, 1), -1)
    assert circuit_number(cp) == pytest.approx(1.0, rel=1e-15)


def test_circuit_number_example_two_high_precision():
    getcontext().prec = 50
    cp = CircuitPolynomial([(0, 0), (80, 0), (0, 78)], [F(187, 208), 1, 1], (5, 3), -8)
    # (1/lambda_1)^lambda_1 (1/lambda_2)^lambda_2 with lambda = (1/16, 1/26)
    expected = Decimal(16) ** (Decimal(1) / 16) * Decimal(26) ** (Decimal(1) / 26)
    assert circuit_number(cp) == pytest.approx(float(expected), rel=1e-13)
    assert float(expected) == pytest.approx(1.34796790175007, rel=1e-12)


def test_circuit_nonneg_boundary():
    assert circuit_nonneg(sec2_circuit(THETA_SEC2))
    assert circuit_nonneg(sec2_circuit(-THETA_SEC2))
    assert not circuit_nonneg(sec2_circuit(THETA_SEC2 + 0.01))
    # confirm the violation numerically: the polynomial takes a negative value
    f = sec2_circuit(-(THETA_SEC2 + 0.01)).to_polynomial()
    assert approx_min(f, budget=4000).best_value < 0


def test_circuit_nonneg_even_beta():
    base = [(0, 0), (4, 0), (0, 4)]
    theta = circuit_number(CircuitPolynomial(base, [1, 1, 1], (2, 2), -1))
    assert circuit_nonneg(CircuitPolynomial(base, [1, 1, 1], (2, 2), 10 * theta))
    assert circuit_nonneg(CircuitPolynomial(base, [1, 1, 1], (2, 2), -theta))
    assert not circuit_nonneg(CircuitPolynomial(base, [1, 1, 1], (2, 2), -1.01 * theta))


def test_circuit_validation():
    with pytest.raises(ValueError):
        CircuitPolynomial([(0, 0), (6, 0), (0, 4)], [1, 0, 1], (1, 1), -1)
    with pytest.raises(ValueError):
        CircuitPolynomial([(0, 0), (5, 0), (0, 4)], [1, 1, 1], (1, 1), -1)
    with pytest.raises(ValueError):
        CircuitPolynomial([(0, 0), (6, 0), (0, 4)], [1, 1, 1], (7, 7), -1)
    with pytest.raises(ValueError):
        CircuitPolynomial([(0, 0), (6, 0), (0, 4)], [1, 1, 1], (1, 1), 0)


def test_classify():
    assert classify_circuit(sec2_circuit(-1)) == "binomial_sos"
    assert classify_circuit(sec2_circuit(-2 * THETA_SEC2)) == "not_nonnegative"
    motz = CircuitPolynomial([(0, 0), (4, 2), (2, 4)], [F(1, 3)] * 3, (2, 2), -1)
    assert classify_circuit(motz, maximal_mediated_set(motz.vertices)) == "sonc_only"
    sq = CircuitPolynomial([(0, 0), (4, 2), (2, 4)], [1, 1, 1], (2, 2), 3)
    assert classify_circuit(sq) == "monomial_squares"


def test_vertex_weight_criterion(ex1):
    prof = build_profile(ex1)
    a = {((3, 3), 0): 4.0, ((3, 3), 1): 1.0, ((3, 3), 2): 1.0}
    assert not verify_theorem31(prof, ex1, a)  # 4 exceeds the constant budget 1/4
    shifted = parse_polynomial("4 + x1^8 + x1^2*x2^6 + 4*x1^3*x2^3", 2)
    assert verify_theorem31(build_profile(shifted), shifted, a)
    a[((3, 3), 0)] = 3.9
    assert not verify_theorem31(build_profile(shifted), shifted, a)
    with pytest.raises(StructureMismatch):
        verify_theorem31(prof, ex1, {((3, 3), 1): 1.0})
    with pytest.raises(StructureMismatch):
        verify_theorem31(prof, ex1, {**a, ((1, 1), 0): 1.0})


def test_vertex_weight_criterion_vacuous():
    f = parse_polynomial("1 + x1^2 + x2^4", 2)
    assert verify_theorem31(build_profile(f), f, {})


def test_shifted_weight_criterion(ex1, ex2):
    a = {((3, 3), 1): 1.0, ((3, 3), 2): 1.0}
    prof = build_profile(ex1)
    assert verify_theorem32(prof, ex1, -3.75, a)
    assert not verify_theorem32(prof, ex1, -3.74, a)
    closed = 187 / 208 * (1 - math.exp((208 * math.log(8) - 13 * math.log(16) - 8 * math.log(26)) / 187))
    a2 = {((5, 3), 1): 1.0, ((5, 3), 2): 1.0}
    assert verify_theorem32(build_profile(ex2), ex2, closed, a2)
    f = parse_polynomial("1 + x1^2", 1)
    assert verify_theorem32(build_profile(f), f, 1, {})


def test_shifted_weight_criterion_top_degree_terms(motzkin):
    # lambda_0 = 0 for x1*x2 on the face between x1^2 and x2^2
    f = parse_polynomial("1 + x1^2 + x2^2 - 2*x1*x2", 2)
    prof = build_profile(f)
    assert verify_theorem32(prof, f, 1, {((1, 1), 1): 1.0, ((1, 1), 2): 1.0})
    assert not verify_theorem32(prof, f, 1, {((1, 1), 1): 0.9, ((1, 1), 2): 1.0})


def test_certificate_example_one(ex1):
    prof = build_profile(ex1)
    cert = certificate_from_gp(prof, ex1, {((3, 3), 1): 1.0, ((3, 3), 2): 1.0}, mediated=True)
    assert float(cert.r) == pytest.approx(-3.75, abs=1e-14)
    assert len(cert.circuits) == 1
    cp, status = cert.circuits[0]
    assert status == "binomial-SOS"
    assert [float(b) for b in cp.vertex_coeffs] == pytest.approx([4, 1, 1], rel=1e-14) and cp.c == 4
    assert circuit_number(cp) == pytest.approx(4.0, rel=1e-14)
    assert cert.remainder.terms == {}
    assert cert.reconstruct() == ex1


def test_certificate_empty_delta():
    f = parse_polynomial("3 + x1^2 + 2*x1^2*x2^2 + x1^4 + x2^4", 2)
    cert = certificate_from_gp(build_profile(f), f, {})
    assert cert.circuits == [] and cert.r == 3
    assert cert.remainder == parse_polynomial("x1^2 + 2*x1^2*x2^2 + x1^4 + x2^4", 2)


def test_certificate_example_three_paper_weights(ex3):
    prof = build_profile(ex3)
    a = {((5, 4), 1): 0.5910, ((5, 4), 2): 0.1685, ((3, 3), 1): 2.4090, ((3, 3), 2): 1.8315}
    cert = certificate_from_gp(prof, ex3, a)
    assert len(cert.circuits) == 2
    assert cert.is_valid()
    assert cert.reconstruct() == ex3
    # the rounded paper weights give a bound within 1e-3 of the optimum
    assert float(cert.r) == pytest.approx(-5.7937, abs=1e-3)


def test_certificate_rejects_bad_weights(ex1):
    prof = build_profile(ex1)
    with pytest.raises(InfeasibleSolution):
        certificate_from_gp(prof, ex1, {((3, 3), 1): 2.0, ((3, 3), 2): 1.0})
    with pytest.raises(InfeasibleSolution):
        certificate_from_gp(prof, ex1, {((3, 3), 1): 1.0, ((3, 3), 2): 1.0}, r=-3.5)


def test_certificate_json_schema(ex3):
    cert = lower_bound(ex3).certificate
    doc = cert.to_json()
    assert set(doc) == {"r", "circuits", "remainder"}
    for c in doc["circuits"]:
        assert set(c) == {"vertices", "vertex_coeffs", "beta", "c", "theta", "status"}
        assert all(isinstance(v, int) for vert in c["vertices"] for v in vert)
    for t in doc["remainder"]:
        assert set(t) == {"exponent", "coeff"} and t["coeff"] > 0


@settings(max_examples=20)
@given(seeds)
def test_circuit_nonneg_matches_sampled_sign(seed):
    rng = np.random.default_rng(seed)
    f = single_circuit(rng)
    prof = build_profile(f)
    beta = prof.omega[0]
    cp = CircuitPolynomial(prof.vertices, [f.coeff(v) for v in prof.vertices], beta, f.coeff(beta))
    theta = circuit_number(cp)
    factor = 1.2 if rng.random() < 0.5 else 0.8
    c = -factor * theta if beta[0] % 2 == 0 and beta[1] % 2 == 0 else factor * theta
    cp = CircuitPolynomial(cp.vertices, cp.vertex_coeffs, beta, c)
    best = approx_min(cp.to_polynomial(), budget=4000, seed=seed % 1000).best_value
    if circuit_nonneg(cp):
        assert best >= -1e-9
    else:
        assert best < 0


@settings(max_examples=20)
@given(seeds)
def test_certificate_scaling_and_monotonicity(seed):
    rng = np.random.default_rng(seed)
    f = single_circuit(rng)
    res = lower_bound(f)
    assert res.ok
    t = F(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
    prof = build_profile(f)
    scaled_a = {k: v * float(t) for k, v in res.a_star.items()}
    c1 = res.certificate
    c2 = certificate_from_gp(build_profile(scale(f, t)), scale(f, t), scaled_a)
    assert float(c2.r) == pytest.approx(float(t) * float(c1.r), rel=1e-9, abs=1e-12)
    for (p1, _), (p2, _) in zip(c1.circuits, c2.circuits):
        assert [float(b) * float(t) for b in p1.vertex_coeffs] == pytest.approx([float(b) for b in p2.vertex_coeffs])
    assert verify_theorem32(prof, f, res.f_gp - 1e-7, res.a_star)
