#!/usr/bin/env python3
"""
Exceptions raised by binomdec
"""


class BinomdecError(Exception):
    """Base class for all library errors"""


class DivisionByZero(BinomdecError, ZeroDivisionError):
    pass


class FieldMismatch(BinomdecError):
    pass


class ZeroArgument(BinomdecError):
    pass


class InvalidPrime(BinomdecError):
    pass


class InvalidField(BinomdecError):
    """Bad extension degree, reducible modulus, or field too large"""


class NotASublattice(BinomdecError):
    pass


class InfiniteQuotient(BinomdecError):
    pass


class DimensionMismatch(BinomdecError):
    pass


class NotInLattice(BinomdecError):
    pass


class MissingRoots(BinomdecError):
    """Roots needed to extend a character are not in the current field"""


class RingMismatch(BinomdecError):
    pass


class NotAFrobeniusPower(BinomdecError):
    pass


class NotNilpotent(BinomdecError):
    pass


class UnitIdeal(BinomdecError):
    pass


class NotCellular(BinomdecError):
    pass


class InconsistentCharacter(BinomdecError):
    pass


class NonBinomialGenerator(BinomdecError):
    def __init__(self, message: str, generator: str = ""):
        super().__init__(message)
        self.generator = generator


class ProblemSyntaxError(BinomdecError):
    """Syntax error in a problem file, with 1-based line and column"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column


class InvariantViolation(BinomdecError):
    """A checked mathematical postcondition did not hold"""
