"""Exception types raised by the library."""

from __future__ import annotations


class MatOrbitError(Exception):
    """Base class for all library-specific failures."""


class SingularTransform(MatOrbitError):
    """Conjugation or basis change requested with a non-invertible matrix."""


class DegenerateResult(MatOrbitError):
    """A polynomial expression collapsed to a constant polynomial."""


class RootFindingFailed(MatOrbitError):
    """The root finder could not locate or certify all roots."""


class EquationSyntaxError(MatOrbitError):
    """Malformed equation text; ``position`` is the 0-based offending offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NonScalarCoefficient(EquationSyntaxError):
    """A matrix literal appeared on the polynomial side of an equation."""


class OutsideDomain(MatOrbitError):
    """Chart parameters outside the admissible (b, c) region."""


class ScalarOrbit(MatOrbitError):
    """Rank evidence requested on a single-point (scalar) orbit."""


class InconsistentClassification(MatOrbitError):
    """Residual passed but the eigenvalue data matches no root; signals
    tolerance misconfiguration."""


class HypothesisViolated(MatOrbitError):
    """A certificate was requested outside its hypotheses."""


class ScalarCascade(MatOrbitError):
    """Iterated-square solve hit a scalar intermediate; the equation is
    effectively homogeneous and should go through the analyzer instead."""

    def __init__(self, message: str, suggestion: str):
        super().__init__(message)
        self.suggestion = suggestion
