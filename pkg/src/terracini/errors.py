"""Exception types shared across the package."""


class ShapeMismatch(ValueError):
    """A point, form or matrix does not fit the ambient space it was used with."""


class NotPrime(ValueError):
    """A modulus given for a modular rank computation is not prime."""


class InconsistentRank(RuntimeError):
    """The exact rank and its modular cross-checks disagree.

    This signals a bug in the elimination code, never a property of the input.
    """


class SingularMap(ValueError):
    """A per-factor change of coordinates is not invertible."""


class BadPermutation(ValueError):
    """A factor permutation is not a permutation of the factor indices."""


class WrongCardinality(ValueError):
    """An operation defined only for a fixed number of points got a different number."""


class BadParams(ValueError):
    """Parameters of a named family constructor violate its preconditions."""


class EmptyProjection(ValueError):
    """A multidegree with no active factor was used where sections are needed."""


class InvariantViolation(ValueError):
    """Parsed input violates a structural invariant (zero vector, duplicate point, ...)."""


class ParseError(ValueError):
    """Malformed job input; carries a dotted path to the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
