"""
Small dense complex linear algebra shared by the walk, coin and spectral code.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with shape (2, 2)
or (4, 4). Nothing here assumes unitarity; callers check it explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "ValidationError",
    "DomainError",
    "NumericalError",
    "as_matrix",
    "as_vector",
    "mat_mul",
    "is_unitary",
    "is_real_matrix",
    "unitary_deviation",
    "identity",
    "pauli_x",
    "hadamard",
    "grover_matrix",
]

SIZES = (2, 4)


class ValidationError(ValueError):
    """Input violates a documented precondition (non-unitary coin, bad norm, ...)."""


class DomainError(ValueError):
    """Parameter lies outside the domain where a closed form applies."""


class NumericalError(ArithmeticError):
    """A residual or convergence check failed."""


@dataclass(frozen=True)
class Tolerance:
    """
    Absolute tolerances used throughout the package.

    Attributes
    ----------
    eq_tol : float
        Entrywise tolerance for matrix identities (unitarity, realness).
    prob_tol : float
        Tolerance for probability sums and state norms.
    """

    eq_tol: float = 1e-12
    prob_tol: float = 1e-10

    def __post_init__(self):
        if not (self.eq_tol > 0 and self.prob_tol > 0):
            raise ValidationError(
                f"tolerances must be strictly positive (got eq_tol={self.eq_tol}, "
                f"prob_tol={self.prob_tol})"
            )


DEFAULT_TOL = Tolerance()


def as_matrix(m: ArrayLike, size: int | None = None) -> NDArray[np.complex128]:
    """Coerce to a read-only complex (2, 2) or (4, 4) array with finite entries."""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] not in SIZES:
        raise ValidationError(f"expected a 2x2 or 4x4 matrix, got shape {arr.shape}")
    if size is not None and arr.shape[0] != size:
        raise ValidationError(f"expected a {size}x{size} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix has non-finite entries")
    arr.setflags(write=False)
    return arr


def as_vector(v: ArrayLike, size: int | None = None) -> NDArray[np.complex128]:
    arr = np.array(v, dtype=np.complex128).reshape(-1)
    if arr.shape[0] not in SIZES or (size is not None and arr.shape[0] != size):
        want = size if size is not None else "2 or 4"
        raise ValidationError(f"expected a vector of length {want}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("vector has non-finite entries")
    arr.setflags(write=False)
    return arr


def mat_mul(a: ArrayLike, b: ArrayLike) -> NDArray[np.complex128]:
    """Product of two matrices of the same size (2 or 4)."""
    a = as_matrix(a)
    b = as_matrix(b, size=a.shape[0])
    return as_matrix(a @ b)


def unitary_deviation(m: ArrayLike) -> float:
    """Largest entry of ``|m* m - I|``."""
    m = np.asarray(m, dtype=np.complex128)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def is_unitary(m: ArrayLike, tol: Tolerance = DEFAULT_TOL) -> bool:
    return unitary_deviation(as_matrix(m)) <= tol.eq_tol


def is_real_matrix(m: ArrayLike, tol: Tolerance = DEFAULT_TOL) -> bool:
    return bool(np.max(np.abs(as_matrix(m).imag)) <= tol.eq_tol)


def identity(size: int = 2) -> NDArray[np.complex128]:
    return as_matrix(np.eye(size))


def pauli_x() -> NDArray[np.complex128]:
    return as_matrix([[0, 1], [1, 0]])


def hadamard() -> NDArray[np.complex128]:
    return as_matrix(np.array([[1, 1], [1, -1]]) / np.sqrt(2.0))


def grover_matrix() -> NDArray[np.complex128]:
    """The 4x4 Grover matrix: -1/2 on the diagonal, 1/2 elsewhere."""
    return as_matrix(0.5 * np.ones((4, 4)) - np.eye(4))
