import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from soncgp import GeometricProgram, Monomial, Posynomial, dump_gp, eval_posynomial, solve_gp
from soncgp.gpsolve import log_posynomial

from strategies import seeds


def mono(c, **exps):
    return Monomial.from_coeff(c, {int(k[1:]): v for k, v in exps.items()})


def test_monotone_single_variable():
    gp = GeometricProgram(Posynomial([mono(1, z0=-1)]), [Posynomial([mono(1, z0=1)])], [], 1)
    sol = solve_gp(gp)
    assert sol.status == "optimal"
    assert sol.z[0] == pytest.approx(1.0, abs=1e-8)
    assert sol.objective_value == pytest.approx(1.0, abs=1e-8)
    assert sol.duality_gap_estimate <= 1e-9


def test_example_one_program():
    obj = Posynomial([mono(0.25 * 4**4 * 0.25 * 0.5**2, z0=-1, z1=-2)])
    cons = [Posynomial([mono(1, z0=1)]), Posynomial([mono(1, z1=1)])]
    sol = solve_gp(GeometricProgram(obj, cons, [], 2))
    assert sol.ok
    assert sol.z == pytest.approx([1, 1], abs=1e-8)
    assert sol.objective_value == pytest.approx(4.0, rel=1e-8)


def test_equality_constraint():
    # minimize z0 z1 with z0 = z1 and z0 >= 1/2
    obj = Posynomial([mono(1, z0=1, z1=1)])
    gp = GeometricProgram(obj, [Posynomial([mono(0.5, z0=-1)])], [mono(1, z0=1, z1=-1)], 2)
    sol = solve_gp(gp)
    assert sol.ok
    assert sol.z == pytest.approx([0.5, 0.5], abs=1e-8)
    assert sol.objective_value == pytest.approx(0.25, rel=1e-8)


def test_inconsistent_equalities():
    gp = GeometricProgram(Posynomial([mono(1, z0=1)]), [], [mono(1, z0=1), mono(2, z0=1)], 1)
    assert solve_gp(gp).status == "infeasible"


def test_infeasible():
    gp = GeometricProgram(Posynomial([mono(1, z0=1)]), [Posynomial([mono(1, z0=1)]), Posynomial([mono(2, z0=-1)])], [], 1)
    assert solve_gp(gp).status == "infeasible"


def test_feasible_set_without_interior():
    gp = GeometricProgram(Posynomial([mono(1, z0=1)]), [Posynomial([mono(1, z0=1)]), Posynomial([mono(1, z0=-1)])], [], 1)
    sol = solve_gp(gp)
    assert sol.ok
    assert sol.z[0] == pytest.approx(1.0, abs=1e-6)
    assert sol.max_violation <= 1e-8


def test_unbounded():
    gp = GeometricProgram(Posynomial([mono(1, z0=1)]), [Posynomial([mono(1, z1=1)])], [], 2)
    assert solve_gp(gp).status == "unbounded"


def test_iteration_limit():
    obj = Posynomial([mono(4, z0=-1, z1=-2)])
    cons = [Posynomial([mono(1, z0=1)]), Posynomial([mono(1, z1=1)])]
    assert solve_gp(GeometricProgram(obj, cons, [], 2), max_iter=3).status == "max_iter"


def test_bad_inputs():
    with pytest.raises(ValueError):
        Monomial.from_coeff(0.0)
    with pytest.raises(ValueError):
        Posynomial([])
    with pytest.raises(ValueError):
        GeometricProgram(Posynomial([mono(1, z3=1)]), [], [], 2)
    with pytest.raises(ValueError):
        solve_gp(GeometricProgram(Posynomial([mono(1, z0=1)]), [], [], 1), tol=0)


def test_eval_posynomial():
    assert eval_posynomial(Posynomial([mono(5)]), [3.0, 7.0]) == pytest.approx(5)
    assert eval_posynomial(Posynomial([mono(1, z0=-1, z1=-2)]), [2, 2]) == pytest.approx(1 / 8)
    with pytest.raises(ValueError):
        eval_posynomial(Posynomial([mono(1, z0=1)]), [0.0])


def test_eval_huge_coefficient():
    # 187/208 (8^208 / (16^13 26^8))^(1/187); 8^208 alone overflows nothing here
    log_c = math.log(187 / 208) + (208 * math.log(8) - 13 * math.log(16) - 8 * math.log(26)) / 187
    p = Posynomial([Monomial(log_c, {0: -13 / 187, 1: -8 / 187})])
    expected = 187 / 208 * (8**208 / (16**13 * 26**8)) ** (1 / 187)
    assert eval_posynomial(p, [1.0, 1.0]) == pytest.approx(expected, rel=1e-13)
    assert 187 / 208 - expected == pytest.approx(-5.6179, abs=1e-4)


def test_log_space_coefficients_beyond_double_range():
    p = Posynomial([Monomial(800.0, {0: 1.0})])
    assert math.isinf(p.terms[0].coeff)
    assert log_posynomial(p, [-800.0], order=0) == pytest.approx(0.0, abs=1e-12)


def test_dump_format():
    obj = Posynomial([mono(2, z0=-1), mono(1, z1=1)])
    gp = GeometricProgram(obj, [Posynomial([mono(1, z0=1)])], [mono(1, z0=1, z1=-1)], 2, ["a", "b"])
    assert dump_gp(gp).splitlines() == [
        "(min (+ (* 2 (^ a -1)) (* 1 (^ b 1))))",
        "(st (<= (* 1 (^ a 1)) 1))",
        "((= (* 1 (^ a 1) (^ b -1)) 1))",
    ]


def random_posynomial(rng, nvars, nterms):
    terms = []
    for _ in range(nterms):
        exps = {i: float(e) for i, e in enumerate(rng.normal(size=nvars) * 2)}
        terms.append(Monomial(float(rng.normal() * 3), exps))
    return Posynomial(terms)


@settings(max_examples=100)
@given(seeds)
def test_log_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    p = random_posynomial(rng, n, int(rng.integers(1, 5)))
    y = rng.normal(size=n)
    _, g = log_posynomial(p, y, order=1)
    h = 1e-5
    fd = np.array([(log_posynomial(p, y + h * e, order=0) - log_posynomial(p, y - h * e, order=0)) / (2 * h)
                   for e in np.eye(n)])
    assert np.allclose(g, fd, rtol=1e-6, atol=1e-6 * max(1.0, np.max(np.abs(g))))


@settings(max_examples=50)
@given(seeds)
def test_log_posynomial_is_convex(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    p = random_posynomial(rng, n, int(rng.integers(1, 5)))
    u, v = rng.normal(size=n), rng.normal(size=n)
    mid = log_posynomial(p, (u + v) / 2, order=0)
    assert mid <= (log_posynomial(p, u, order=0) + log_posynomial(p, v, order=0)) / 2 + 1e-10


@settings(max_examples=30)
@given(seeds)
def test_monotone_box_programs(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    u = np.exp(rng.normal(size=n))
    obj = Posynomial([Monomial(0.0, {i: -float(rng.uniform(0.2, 2)) for i in range(n)})])
    cons = [Posynomial([Monomial(-math.log(u[i]), {i: 1.0})]) for i in range(n)]
    sol = solve_gp(GeometricProgram(obj, cons, [], n))
    assert sol.ok
    assert np.allclose(sol.z, u, rtol=1e-8, atol=0)


@settings(max_examples=30)
@given(seeds)
def test_rescaling_invariance(seed):
    rng = np.random.default_rng(seed)
    n = 2
    obj = Posynomial([Monomial(float(rng.normal()), {0: -float(rng.uniform(0.5, 2)), 1: -float(rng.uniform(0.5, 2))})])
    # a pure term per variable keeps the feasible set bounded
    cons = [Posynomial([Monomial(float(rng.normal()), {0: 1.0}), Monomial(float(rng.normal()), {1: 1.0}),
                        Monomial(float(rng.normal()), {0: float(rng.uniform(0, 2)), 1: float(rng.uniform(0, 2))})])]
    s = np.exp(rng.normal(size=n))

    def rescale(p):
        return Posynomial([Monomial(t.log_coeff + sum(v * math.log(s[k]) for k, v in t.exponents.items()), t.exponents)
                           for t in p.terms])

    a = solve_gp(GeometricProgram(obj, cons, [], n))
    b = solve_gp(GeometricProgram(rescale(obj), [rescale(c) for c in cons], [], n))
    assert a.ok and b.ok
    assert b.objective_value == pytest.approx(a.objective_value, rel=1e-7)
    assert b.z * s == pytest.approx(a.z, rel=1e-4)
