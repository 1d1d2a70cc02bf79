"""Certified lower bounds for sparse polynomials with a simplex Newton polytope.

The bound ``f_gp`` comes from a geometric program whose optimal solution is
turned into a sum of nonnegative circuit polynomials (SONC) certifying
``f - f_gp >= 0``.
"""

from .certify import (
    CircuitPolynomial,
    SoncCertificate,
    certificate_from_gp,
    circuit_nonneg,
    circuit_number,
    classify_circuit,
    verify_theorem31,
    verify_theorem32,
)
from .constrained import ConstrainedProblem, ConstrainedResult, build_h, classify_program, constrained_bound
from .errors import (
    AssumptionError,
    ComplexityLimit,
    InfeasibleSolution,
    InnerInfeasible,
    NonpositiveMu,
    NonpositiveVertexCoefficient,
    NotASimplex,
    NotSupported,
    OddVertex,
    ParseError,
    PointOutsideSimplex,
    SoncError,
    SolverError,
    StructureMismatch,
)
from .geometry import SupportProfile, barycentric, build_profile, lattice_points, newton_vertices
from .gpbuild import BoundResult, build_gp, closed_form_single_circuit, lower_bound
from .gpsolve import GeometricProgram, GpSolution, Monomial, Posynomial, dump_gp, eval_posynomial, solve_gp
from .mediated import MediatedSet, averages, beta_in_pstar, maximal_mediated_set
from .oracle import SamplingReport, approx_min, check_lower_bound
from .poly import Polynomial, add_constant, evaluate, format_polynomial, parse_polynomial, scale

__version__ = "0.1.0"
