"""Exact computation of Shapovalov elements for classical simple Lie algebras.

Construction: degree 1 by summation over routes in the root-poset interval,
degree m by multiplying coefficient-shifted degree-1 factors (falling back to
a direct kernel computation on the degeneracy hyperplane when the shifted
product does not apply).  Verification: symbolic extremality plus brute-force
Verma-module oracles, all in exact rational arithmetic.
"""

from .chevalley import StructureConstants, build_structure_constants
from .oracle import (
    NonGenericConstructionError,
    SingularSpace,
    bruteforce_singular,
    compare_up_to_scalar,
    gram_kernel,
    oracle_compare,
    verify_extremal_symbolic,
)
from .rootsys import AlgebraType, RootSystem, build_root_system, hasse_b_minus
from .shapelem import (
    AdmissibleChoice,
    DenominatorLocusError,
    ShapovalovElement,
    admissible_choices,
    default_choice,
    eta,
    hyperplane,
    route_count,
    shift_tau,
    theta_m,
    theta_one,
)
from .verma import (
    Context,
    UEAElement,
    act_e,
    contravariant_form,
    lambda_context,
    multiply,
    numeric_context,
    param_context,
    straighten,
    weight_space_basis,
)

__all__ = [
    "AdmissibleChoice", "AlgebraType", "Context", "DenominatorLocusError",
    "NonGenericConstructionError", "RootSystem", "ShapovalovElement",
    "SingularSpace", "StructureConstants", "UEAElement", "act_e",
    "admissible_choices", "bruteforce_singular", "build_root_system",
    "build_structure_constants", "compare_up_to_scalar", "contravariant_form",
    "default_choice", "eta", "gram_kernel", "hasse_b_minus", "hyperplane",
    "lambda_context", "multiply", "numeric_context", "oracle_compare",
    "param_context", "route_count", "shift_tau", "straighten", "theta_m",
    "theta_one", "verify_extremal_symbolic", "weight_space_basis",
]

__version__ = "0.1.0"
