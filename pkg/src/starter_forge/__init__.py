"""Two-quotient strong starters over finite fields, with brute-force verification."""

from .errors import (
    ConstructionError,
    DecompositionError,
    FieldError,
    FieldMismatchError,
    MembershipError,
    TheoremViolation,
)
from .ffield import (
    FieldElement,
    FieldSpec,
    field_of_order,
    is_quadratic_residue,
    least_primitive_element,
    make_field,
    residue_sets,
)

__version__ = "0.1.0"
