# -*- coding: utf-8 -*-
"""
Shared helpers: error types, tolerances and small matrix utilities.
"""

from fractions import Fraction
from typing import Union

import numpy as np

# Absolute tolerances
EXACT_TOL = 1e-12       # Hermiticity, operator identities, forbidden elements
RESIDUAL_TOL = 1e-10    # eigen-residuals, last-qubit identity, unitarity
ROUNDING_TOL = 1e-8     # eigenvalue -> quantum number rounding
STATE_TOL = 1e-8        # density-matrix trace / positivity
DRIFT_TOL = 1e-6        # trace drift tolerated during integration

HalfInteger = Union[int, float, Fraction, str]


class SupercoherenceError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(SupercoherenceError, ValueError):
    """A precondition on an argument was violated."""


class UsageError(InvalidArgumentError):
    """Command-line or config-file input could not be parsed."""


class NumericalError(SupercoherenceError, RuntimeError):
    """A numerical invariant failed."""


class IntegrationError(NumericalError):
    """Master-equation integration lost trace, Hermiticity or positivity."""


class EstimationError(NumericalError):
    """A rate could not be estimated from simulated data."""


def as_half_integer(value: HalfInteger) -> Fraction:
    """Parse 0, 1/2, '3/2', 1.5 ... into an exact half-integer."""
    try:
        if isinstance(value, float):
            frac = Fraction(value).limit_denominator(2)
            if abs(float(frac) - value) > ROUNDING_TOL:
                raise InvalidArgumentError(f"{value} is not a half-integer")
        else:
            frac = Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidArgumentError(f"cannot read {value!r} as a half-integer") from e
    if frac.denominator not in (1, 2):
        raise InvalidArgumentError(f"{value!r} is not a half-integer")
    return frac


def spin_from_casimir(value: float) -> Fraction:
    """Invert J(J+1) = value, snapping to the nearest half-integer."""
    j = (-1.0 + np.sqrt(max(1.0 + 4.0 * value, 0.0))) / 2.0
    snapped = Fraction(round(2 * j), 2)
    if abs(float(snapped) * (float(snapped) + 1) - value) > ROUNDING_TOL * max(1.0, abs(value)):
        raise NumericalError(f"eigenvalue {value} is not of the form J(J+1)")
    return snapped


def frozen(matrix: np.ndarray) -> np.ndarray:
    """Return the matrix as a read-only complex128 array."""
    out = np.array(matrix, dtype=complex)
    out.flags.writeable = False
    return out


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def max_abs(matrix: np.ndarray) -> float:
    """Largest absolute entry (0 for empty input)."""
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def is_hermitian(matrix: np.ndarray, tol: float = EXACT_TOL) -> bool:
    return max_abs(matrix - matrix.conj().T) < tol


def projector(columns: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of orthonormal columns."""
    return columns @ columns.conj().T


def format_spin(value: Fraction) -> str:
    """1/2 -> '1/2', 1 -> '1'."""
    return str(Fraction(value))
