"""
Bounds on semialgebraic sets
============================

For ``min f`` subject to ``g_i >= 0`` the bound maximizes over multipliers
``mu >= 0`` the unconstrained bound of ``f - sum_i mu_i g_i``. When the signs
fit, this is a single geometric program. Otherwise a coordinate search over
``mu`` is used.
"""

from soncgp import ConstrainedProblem, approx_min, classify_program, constrained_bound, parse_polynomial

f = parse_polynomial("1 + x1^2", 1)
g = parse_polynomial("x1 - 1", 1)
prob = ConstrainedProblem(f, [g])
res = constrained_bound(prob)
print(classify_program(prob), res.method, "bound:", res.bound, "mu:", res.mu)  # true minimum 2 at x = 1

f = parse_polynomial("2 + x1^6 + x2^6 + x3^6 + x1^2*x2*x3^2 - x1^4 - x2^4 - x3^4 - x2*x3^3 - x1*x2^2", 3)
g = parse_polynomial("1 - x1^2*x2^2*x3^2", 3)
prob = ConstrainedProblem(f, [g])
res = constrained_bound(prob)
print(classify_program(prob), res.method, "bound:", res.bound, "notes:", res.notes)
print("unconstrained sampled minimum:", approx_min(f).best_value)
