"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input problems -> 2, capacity -> 3,
theorem violations -> 4.
"""


class PregeomError(Exception):
    pass


class ValidationError(PregeomError, ValueError):
    """Malformed input: bad permutation, bad pregeometry, bad binding."""


class MembershipError(ValidationError):
    """An element was expected to lie in a group and does not."""


class CapacityError(PregeomError):
    """An enumeration would exceed a configured cap."""


class TheoremViolation(PregeomError):
    """A structural claim that must hold on valid input failed to verify.

    Never raised for bad data; it signals a bug or a counterexample.
    """


class ClassificationError(PregeomError):
    """A classifier was called on a pair outside its precondition."""
