# -*- coding: utf-8 -*-
"""
Errors
------

Exception hierarchy shared by every toricpy module. Input problems
derive from ``ValueError`` and failed assertions about the geometry
derive from ``RuntimeError``, so the command line can map them to its
exit codes.

"""


class ToricError(Exception):
    """Base class for all toricpy errors."""


class RationalFormatError(ToricError, ValueError):
    """A string could not be read as a rational ``p/q``."""


class PolytopeFormatError(ToricError, ValueError):
    """Malformed polytope JSON. The message names the offending field."""


class ParameterOutOfRange(ToricError, ValueError):
    """A constructor parameter violates its admissible range."""


class InvalidPolytope(ToricError, ValueError):
    """The H-representation does not describe a valid Delzant polytope."""


class UnboundedPolytope(InvalidPolytope):
    pass


class EmptyPolytope(InvalidPolytope):
    pass


class DegeneratePolytope(InvalidPolytope):
    """Feasible set is not full-dimensional."""


class RedundantFacet(InvalidPolytope):
    pass


class PointOutside(ToricError, ValueError):
    pass


class PointNotInterior(ToricError, ValueError):
    pass


class InvalidProbe(ToricError, ValueError):
    pass


class ZeroPolynomial(ToricError, ValueError):
    pass


class IllConditioned(ToricError, ArithmeticError):
    """Numeric root clustering was ambiguous."""


class InvalidSlice(ToricError, ValueError):
    pass


class EmptySlice(ToricError, ValueError):
    pass


class IrregularLevel(ToricError, RuntimeError):
    """The level set is not regular; ``report`` holds the failures."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class MismatchedReduction(ToricError, RuntimeError):
    pass


class EquivalenceUnknown(ToricError, RuntimeError):
    """The equivalence search exceeded its candidate bound."""
