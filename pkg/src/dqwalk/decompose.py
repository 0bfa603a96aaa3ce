"""
Coins of decomposed walks and their lift to 4-state linear walks.

A decomposed coin is a pair ``(M_R, M_I)`` of 2x2 matrices acting as
``psi -> M_R Re(psi) + i M_I Im(psi)``. It preserves norms exactly when both
matrices are unitary and ``M_R^* M_I`` is real. Stacking real and imaginary
parts, ``(Re psi1, Re psi2, Im psi1, Im psi2)``, turns the walk into a linear
4-state walk with the real orthogonal coin::

    [[Re M_R, -Im M_I],
     [Im M_R,  Re M_I]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    ValidationError,
    as_matrix,
    unitary_deviation,
)
from .walk import WalkState

__all__ = [
    "IsometryDiagnostic",
    "CoinPair",
    "PairParams",
    "check_isometry",
    "pair_from_params",
    "lift_state",
    "unlift_state",
    "lift_coin",
    "wrap_angle",
    "grover_family_params",
    "grover_family_pair",
    "grover_family_matrix",
    "random_pair_params",
]


def wrap_angle(a: float) -> float:
    """Map an angle into ``[-pi, pi)``."""
    w = (float(a) + math.pi) % (2 * math.pi) - math.pi
    # float rounding can land exactly on +pi
    return -math.pi if w >= math.pi else w


@dataclass(frozen=True)
class IsometryDiagnostic:
    unitary_r: bool
    unitary_i: bool
    product_real: bool
    deviation_r: float
    deviation_i: float
    product_imag: float

    @property
    def is_isometry(self) -> bool:
        return self.unitary_r and self.unitary_i and self.product_real

    def failures(self) -> list[str]:
        names = ("unitary_r", "unitary_i", "product_real")
        return [n for n in names if not getattr(self, n)]

    def as_dict(self) -> dict:
        return {
            "unitary_r": self.unitary_r,
            "unitary_i": self.unitary_i,
            "product_real": self.product_real,
            "is_isometry": self.is_isometry,
            "deviation_r": self.deviation_r,
            "deviation_i": self.deviation_i,
            "product_imag": self.product_imag,
        }


def check_isometry(m_r: ArrayLike, m_i: ArrayLike, tol: Tolerance = DEFAULT_TOL) -> IsometryDiagnostic:
    """Test the three isometry conditions on a candidate coin pair."""
    m_r = as_matrix(m_r, size=2)
    m_i = as_matrix(m_i, size=2)
    dev_r = unitary_deviation(m_r)
    dev_i = unitary_deviation(m_i)
    imag = float(np.max(np.abs((m_r.conj().T @ m_i).imag)))
    return IsometryDiagnostic(
        unitary_r=dev_r <= tol.eq_tol,
        unitary_i=dev_i <= tol.eq_tol,
        product_real=imag <= tol.eq_tol,
        deviation_r=dev_r,
        deviation_i=dev_i,
        product_imag=imag,
    )


@dataclass(frozen=True, init=False)
class CoinPair:
    """A validated decomposed coin. Construction fails unless it is an isometry."""

    m_r: NDArray[np.complex128]
    m_i: NDArray[np.complex128]
    diagnostic: IsometryDiagnostic = field(compare=False, repr=False)

    def __init__(self, m_r: ArrayLike, m_i: ArrayLike, tol: Tolerance = DEFAULT_TOL):
        m_r = as_matrix(m_r, size=2)
        m_i = as_matrix(m_i, size=2)
        diag = check_isometry(m_r, m_i, tol)
        if not diag.is_isometry:
            raise ValidationError(
                "coin pair is not an isometry: failed " + ", ".join(diag.failures())
            )
        object.__setattr__(self, "m_r", m_r)
        object.__setattr__(self, "m_i", m_i)
        object.__setattr__(self, "diagnostic", diag)

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.m_r.imag == 0) and np.all(self.m_i.imag == 0))


@dataclass(frozen=True)
class PairParams:
    """
    Parameters of coin pairs whose product ``M_R^* M_I`` is ``[[e, f], [f, -e]]``.

    ``delta`` is wrapped into ``[-pi, pi)``. ``theta`` and ``phi`` are the
    arguments of ``alpha`` and ``beta``, taken as 0 when the modulus is 0.
    """

    delta: float
    alpha: complex
    beta: complex
    e: float
    f: float

    def __post_init__(self):
        object.__setattr__(self, "delta", wrap_angle(self.delta))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "e", float(self.e))
        object.__setattr__(self, "f", float(self.f))

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> "PairParams":
        vals = (self.delta, self.alpha.real, self.alpha.imag, self.beta.real, self.beta.imag, self.e, self.f)
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError("pair parameters must be finite")
        s = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(s - 1) > tol.eq_tol:
            raise ValidationError(f"|alpha|^2 + |beta|^2 = {s:.17g}, expected 1")
        t = self.e**2 + self.f**2
        if abs(t - 1) > tol.eq_tol:
            raise ValidationError(f"e^2 + f^2 = {t:.17g}, expected 1")
        return self

    @property
    def theta(self) -> float:
        return math.atan2(self.alpha.imag, self.alpha.real) if self.alpha != 0 else 0.0

    @property
    def phi(self) -> float:
        return math.atan2(self.beta.imag, self.beta.real) if self.beta != 0 else 0.0

    @classmethod
    def from_polar(cls, delta, abs_alpha, theta, phi, e, f) -> "PairParams":
        abs_beta = math.sqrt(max(0.0, 1.0 - abs_alpha**2))
        return cls(
            delta,
            abs_alpha * complex(math.cos(theta), math.sin(theta)),
            abs_beta * complex(math.cos(phi), math.sin(phi)),
            e,
            f,
        )


def pair_from_params(p: PairParams, tol: Tolerance = DEFAULT_TOL) -> CoinPair:
    p.validate(tol)
    a, b, e, f = p.alpha, p.beta, p.e, p.f
    ac, bc = a.conjugate(), b.conjugate()
    g = complex(math.cos(p.delta), math.sin(p.delta))
    m_r = g * np.array([[a, b], [-bc, ac]])
    m_i = g * np.array([[e * a + f * b, f * a - e * b], [-e * bc + f * ac, -f * bc - e * ac]])
    return CoinPair(m_r, m_i, tol=tol)


def lift_state(state: WalkState) -> WalkState:
    """``(psi1, psi2) -> (Re psi1, Re psi2, Im psi1, Im psi2)`` at every site."""
    if state.dim != 2:
        raise ValidationError("lift_state expects a 2-component state")
    a = state.amplitudes
    return WalkState(state.offset, np.concatenate([a.real, a.imag], axis=1))


def unlift_state(state: WalkState) -> WalkState:
    """Adjoint of :func:`lift_state`: ``(psi1 + i psi3, psi2 + i psi4)``."""
    if state.dim != 4:
        raise ValidationError("unlift_state expects a 4-component state")
    a = state.amplitudes
    return WalkState(state.offset, a[:, :2] + 1j * a[:, 2:])


def lift_coin(pair: CoinPair) -> NDArray[np.complex128]:
    m_r, m_i = pair.m_r, pair.m_i
    return as_matrix(np.block([[m_r.real, -m_i.imag], [m_r.imag, m_i.real]]))


# Grover family: theta = 0, e = 0, f = -1, phi = -pi/2, |alpha| = |beta| = 1/sqrt(2)


def grover_family_params(delta: float) -> PairParams:
    s = 1 / math.sqrt(2)
    return PairParams(delta, complex(s, 0.0), complex(0.0, -s), 0.0, -1.0)


def grover_family_pair(delta: float, tol: Tolerance = DEFAULT_TOL) -> CoinPair:
    return pair_from_params(grover_family_params(delta), tol)


def grover_family_matrix(delta: float) -> NDArray[np.complex128]:
    """4x4 coin of the Grover family; the Grover matrix itself at 3pi/4."""
    c, s = math.cos(delta), math.sin(delta)
    m = np.array(
        [
            [c, s, -c, s],
            [s, c, s, -c],
            [s, -c, -s, -c],
            [-c, s, -c, -s],
        ]
    )
    return as_matrix(m / math.sqrt(2))


def random_pair_params(rng: np.random.Generator) -> PairParams:
    """Parameters drawn uniformly in angle (generic: no special relations)."""
    abs_alpha = math.sqrt(rng.uniform())
    theta, phi, delta, g = rng.uniform(-math.pi, math.pi, size=4)
    return PairParams.from_polar(delta, abs_alpha, theta, phi, math.cos(g), math.sin(g))
