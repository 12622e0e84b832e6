"""Exception types shared across the package."""


class MinreslocError(Exception):
    """Base class for all package errors."""


class NegativeValuation(MinreslocError):
    pass


class ZeroPolynomial(MinreslocError):
    pass


class ExactDivisionError(MinreslocError):
    """Internal: an exact division in C[t^Q] left a remainder (a bug)."""


class DegreeMismatch(MinreslocError):
    pass


class SingularMatrix(MinreslocError):
    pass


class NotNormalized(MinreslocError):
    pass


class SamePoint(MinreslocError):
    pass


class ResidueExtensionRequired(MinreslocError):
    """A residue factorization produced irreducible factors of degree > 1.

    The computation would need a residue field extension to name the
    missing directions; the degrees of the offending factors are reported.
    """

    def __init__(self, degrees, message=""):
        self.degrees = sorted(degrees)
        text = message or "residue factor degrees %s require a field extension" % self.degrees
        super().__init__(text)


class IdIndifferentUndefined(MinreslocError):
    pass


class NotIdIndifferent(MinreslocError):
    pass


class NotFixed(MinreslocError):
    pass


class IncompleteEnumeration(MinreslocError):
    """The weight sum over all enumerated points missed d-1 (a bug, not a warning)."""

    def __init__(self, total, expected):
        self.total = total
        self.expected = expected
        super().__init__("weight sum %s != expected %s" % (total, expected))


class IdentityViolation(MinreslocError):
    pass


class CapExceeded(MinreslocError):
    pass


class CrossCheckFailure(MinreslocError):
    """Two of the four minimal-locus characterizations disagreed."""

    def __init__(self, pair, detail=""):
        self.pair = pair
        super().__init__("disagreement between %s and %s: %s" % (pair[0], pair[1], detail))


class ParseError(MinreslocError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)


class DegenerateMap(MinreslocError):
    pass
