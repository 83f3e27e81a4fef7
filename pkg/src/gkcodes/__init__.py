"""Multi-point evaluation codes on the Giulietti-Korchmaros maximal curve.

Exact arithmetic throughout: field towers F_p < F_q < F_{q^2} < F_{q^6},
rational-point enumeration, divisor calculus with local power series,
Riemann-Roch bases, the four code families, and the code automorphism
machinery, all verifiable at desk scale (q = 2, 3).
"""

from .fields import FieldTower, make_tower
from .curve import GKCurve, AffinePoint, INFINITY
from .divisors import (
    Divisor, Atom, FunctionExpr,
    X, Y, Z, x_minus, z_minus, tangent_at,
    principal_divisor, divisor_of, valuation,
    evaluate, leading_coefficient, local_expansion,
)
from .riemann_roch import RRBasis, candidate_functions, rr_basis, ell, reduced_dimension
from .codes import (
    CodeSpec, LinearCode, build_code, witness_min_weight,
    dual_code, omega_equivalence, exhaustive_min_distance, singleton_defect,
)
from .symmetry import (
    Translation, Diagonal, Multiplier, Inversion, FieldFrobenius,
    apply_point, generators_for, induced_code_map, check_invariance,
    permutation_group_order,
)

__version__ = "0.1.0"
