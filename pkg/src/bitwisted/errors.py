"""Exception hierarchy shared by all modules."""


class GroupError(Exception):
    """Base class for every error raised by this package."""


# -- finite groups -----------------------------------------------------------

class InvalidPermutation(GroupError, ValueError):
    pass


class ClosureExceeded(GroupError):
    def __init__(self, cap):
        super().__init__(f"closure produced more than {cap} elements")
        self.cap = cap


class InvalidTable(GroupError, ValueError):
    pass


class NotHomomorphism(GroupError, ValueError):
    def __init__(self, x, y):
        super().__init__(f"homomorphism law fails on the pair ({x}, {y})")
        self.x = x
        self.y = y


# -- abelian groups ----------------------------------------------------------

class NotWellDefined(GroupError, ValueError):
    pass


class InfiniteDual(GroupError):
    pass


# -- character tables --------------------------------------------------------

class InconsistentClassAlgebra(GroupError):
    pass


class DegenerateCombination(GroupError):
    pass


class ToleranceExceeded(GroupError):
    pass


class NoMatchingRow(GroupError):
    pass


class NotAutomorphism(GroupError, ValueError):
    pass


# -- Baumslag-Solitar --------------------------------------------------------

class BaseMismatch(GroupError, ValueError):
    pass


class RelationViolated(GroupError, ValueError):
    pass


class ImageOfBNotInKernel(GroupError, ValueError):
    pass


class NotInjectiveAdmissible(GroupError, ValueError):
    pass


# -- polycyclic --------------------------------------------------------------

class DimensionMismatch(GroupError, ValueError):
    pass


class NotCompatible(GroupError, ValueError):
    pass


class NotUnimodular(GroupError, ValueError):
    pass


class DoesNotRespect(GroupError):
    def __init__(self, which, generator):
        super().__init__(f"{which} does not descend: image of kernel generator {generator} is nontrivial")
        self.which = which
        self.generator = generator


# -- parsing -----------------------------------------------------------------

class ParseError(GroupError, ValueError):
    def __init__(self, message, line=1, column=1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


class ValidationError(GroupError, ValueError):
    pass


class UnknownGenerator(ParseError):
    pass


class MalformedExponent(ParseError):
    pass
