"""
Lower bounds for sparse polynomials on a simplex support
=========================================================

Each polynomial below has a Newton polytope that is a simplex with the
constant term as a vertex. ``lower_bound`` solves a small geometric program
and returns ``f_gp`` together with a certificate that ``f - f_gp`` is a sum
of nonnegative circuit polynomials. The sampling oracle gives an upper bound
on the true minimum for comparison.
"""

from soncgp import approx_min, lower_bound, parse_polynomial

cases = {
    "cubic cross term": ("1/4 + x1^8 + x1^2*x2^6 + 4*x1^3*x2^3", 2),
    "high degree": ("187/208 + x1^80 + x2^78 - 8*x1^5*x2^3", 2),
    "two inner terms": ("17/20 + 3*x1^8*x2^4 + 2*x1^6*x2^8 - 10*x1^3*x2^3 + x1^5*x2^4", 2),
    "Motzkin": ("1/3 + 1/3*x1^4*x2^2 + 1/3*x1^2*x2^4 - x1^2*x2^2", 2),
    "three variables": ("2 + x1^6 + x2^6 + x3^6 + x1^2*x2*x3^2 - x1^4 - x2^4 - x3^4 - x2*x3^3 - x1*x2^2", 3),
}

for name, (text, n) in cases.items():
    f = parse_polynomial(text, n)
    res = lower_bound(f)
    rep = approx_min(f)
    print(f"{name:18s} f_gp = {res.f_gp:14.8f}   sampled min = {rep.best_value:14.8f}   "
          f"solver steps = {res.solver.iterations}")

# the certificate: circuit polynomials plus monomial squares
f = parse_polynomial(cases["two inner terms"][0], 2)
cert = lower_bound(f).certificate
for c, status in cert.circuits:
    print(f"circuit at {c.beta}: c = {float(c.c):.4f}, circuit number = {c.theta:.4f} ({status})")
print("reconstruction error:", cert.reconstruction_error())
