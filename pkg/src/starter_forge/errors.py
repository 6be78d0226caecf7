"""Exception types shared across the package."""


class FieldError(ValueError):
    """Invalid field parameters or an encoding outside [0, q)."""


class FieldMismatchError(FieldError):
    """Operands belong to different fields."""


class DecompositionError(ValueError):
    """q is not of the form 2^k * t + 1 with k > 1 and t > 1 odd."""


class MembershipError(ValueError):
    """A beta value is not in the set the construction requires."""


class ConstructionError(ValueError):
    """Preconditions of a starter construction are not met."""


class TheoremViolation(RuntimeError):
    """An existence claim failed to produce a witness.

    Never raised for valid inputs unless the arithmetic is broken.
    """
