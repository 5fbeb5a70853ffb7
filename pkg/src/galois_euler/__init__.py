"""Second partial Euler characteristics of G_{K,S} and related invariants.

Exact prime-exponent arithmetic throughout; see :mod:`galois_euler.formulas`
for the closed forms and :mod:`galois_euler.cohom` for the group cohomology.
"""

from .cardinality import FormalCardinality, ValueOrBound
from .cohom import chi2_finite, cocycle_oracle, cohomology, herbrand_quotient
from .fingroup import FiniteGroup, builtin_group, from_permutations
from .formulas import (
    EulerContext,
    case_bound,
    chi2_exact_finite,
    chi2_upper_bound,
    dimension_defect,
    epsilon_of,
    etale_cards,
    etale_chi,
    lubotzky_r,
    presentation_bounds,
    tate_rhs,
    whatif_enlarge,
)
from .galmod import COMPLEX, GaloisModule, cartier_dual, fixed_points, trivial_module
from .numfield import NumberField, PlaceSet, quadratic_field, rational_field, split_prime

__version__ = "0.1.0"

__all__ = [
    "COMPLEX",
    "EulerContext",
    "FiniteGroup",
    "FormalCardinality",
    "GaloisModule",
    "NumberField",
    "PlaceSet",
    "ValueOrBound",
    "builtin_group",
    "cartier_dual",
    "case_bound",
    "chi2_exact_finite",
    "chi2_finite",
    "chi2_upper_bound",
    "cocycle_oracle",
    "cohomology",
    "dimension_defect",
    "epsilon_of",
    "etale_cards",
    "etale_chi",
    "fixed_points",
    "from_permutations",
    "herbrand_quotient",
    "lubotzky_r",
    "presentation_bounds",
    "quadratic_field",
    "rational_field",
    "split_prime",
    "tate_rhs",
    "trivial_module",
    "whatif_enlarge",
]
