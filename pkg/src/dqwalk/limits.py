"""
Limit laws of ``X_n / n`` and exact finite-time states.

- Konno's density for 2-state linear walks, weighted by ``1 - C y``.
- The Grover-family limit measure: an atom of mass ``A`` at the origin plus a
  density on ``(-|p|, |p|)``.
- Exact states at the four special angles where the family is periodic
  (``pi/4``, ``-3pi/4``) or ballistic (``3pi/4``, ``-pi/4``).

Densities with inverse-square-root edge singularities are integrated after
the substitution ``y = r sin t``, which leaves a smooth integrand in ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import cumulative_trapezoid, trapezoid

from .decompose import wrap_angle
from .numerics import DEFAULT_TOL, DomainError, NumericalError, Tolerance, ValidationError, as_matrix, as_vector
from .spectral import grover_log_derivatives, grover_p, grover_projections, grover_q, momentum_grid
from .walk import WalkState

__all__ = [
    "konno_density",
    "konno_drift_coeff",
    "KonnoLimit",
    "konno_limit",
    "GroverLimit",
    "grover_limit",
    "grover_density",
    "special_angle",
    "exact_state_B",
    "exact_state_C",
    "exact_state",
    "limit_moments",
    "N_T",
    "N_K",
]

N_T = 4096  # trapezoid nodes in t for x-space integrals
N_K = 2048  # momentum grid for k-space integrals

_SPECIAL = {
    "B": (0.25 * math.pi, -0.75 * math.pi),
    "C": (0.75 * math.pi, -0.25 * math.pi),
}


def _t_grid(n: int = N_T) -> NDArray[np.float64]:
    return np.linspace(-0.5 * math.pi, 0.5 * math.pi, n + 1)


# ---------------------------------------------------------------- Konno


def konno_density(r: float, x):
    """
    ``sqrt(1-r^2) / (pi (1-x^2) sqrt(r^2-x^2))`` on the open interval ``(-r, r)``, 0 elsewhere.
    """
    if not 0 < r < 1:
        raise DomainError(f"Konno density needs 0 < r < 1, got r={r}")
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < r
    xs = np.where(inside, x, 0.0)
    val = math.sqrt(1 - r * r) / (math.pi * (1 - xs * xs) * np.sqrt(r * r - xs * xs))
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def konno_drift_coeff(a: complex, b: complex, phi: ArrayLike) -> float:
    """``C(a, b; phi1, phi2) = |phi1|^2 - |phi2|^2 - 2 Re(a phi1 conj(b phi2)) / |a|^2``."""
    if a == 0:
        raise DomainError("drift coefficient needs a != 0")
    p1, p2 = as_vector(phi, size=2)
    cross = a * p1 * (b * p2).conjugate()
    return float(abs(p1) ** 2 - abs(p2) ** 2 - 2 * cross.real / abs(a) ** 2)


@dataclass(frozen=True)
class KonnoLimit:
    """Limit of a 2-state linear walk: density ``(1 - C y) f_K(y; r)``."""

    r: float
    c_coeff: float

    def __post_init__(self):
        if not 0 < self.r < 1:
            raise DomainError(f"need 0 < |a| < 1, got {self.r}")

    @property
    def atom(self) -> float:
        return 0.0

    @property
    def support(self) -> float:
        return self.r

    def density(self, y):
        y = np.asarray(y, dtype=float)
        return (1 - self.c_coeff * y) * konno_density(self.r, y)

    def _t_integrand(self, t):
        # density(y) dy with y = r sin t
        r, y = self.r, self.r * np.sin(t)
        return (1 - self.c_coeff * y) * math.sqrt(1 - r * r) / (math.pi * (1 - y * y))

    def cdf_continuous(self, y):
        return _cdf_by_substitution(self._t_integrand, self.r, y)

    def continuous_mass(self) -> float:
        return float(trapezoid(self._t_integrand(_t_grid()), _t_grid()))

    def moment(self, r: int) -> float:
        t = _t_grid()
        return float(trapezoid(self._t_integrand(t) * (self.r * np.sin(t)) ** r, t))

    def header(self) -> dict:
        return {"r": self.r, "C": self.c_coeff, "A": 0.0, "support": self.r}


def konno_limit(coin: ArrayLike, phi: ArrayLike) -> KonnoLimit:
    m = as_matrix(coin, size=2)
    a, b = complex(m[0, 0]), complex(m[0, 1])
    return KonnoLimit(abs(a), konno_drift_coeff(a, b, phi))


def _cdf_by_substitution(integrand, radius: float, y):
    t = _t_grid(8 * N_T)
    cum = cumulative_trapezoid(integrand(t), t, initial=0.0)
    y = np.asarray(y, dtype=float)
    tt = np.arcsin(np.clip(y / radius, -1.0, 1.0))
    out = np.interp(tt, t, cum)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------- Grover family


def special_angle(delta: float, tol: float = 1e-12) -> str | None:
    """``"B"`` for pi/4, -3pi/4; ``"C"`` for 3pi/4, -pi/4; otherwise None."""
    d = wrap_angle(delta)
    for tag, angles in _SPECIAL.items():
        if any(abs(d - a) <= tol for a in angles):
            return tag
    return None


@dataclass(frozen=True)
class GroverLimit:
    """
    Limit measure ``A delta_0 + f(y) 1{|y| < |p|}`` of the Grover family.

    ``phi`` is the 4-component initial vector at the origin. Only real
    ``phi`` comes from a decomposed walk (see :attr:`dqw_realizable`).
    """

    delta: float
    phi: NDArray[np.complex128]
    p: float
    q: float
    d0: float
    d1: float
    d2: float
    a_coeff: float

    @property
    def atom(self) -> float:
        return self.a_coeff

    @property
    def support(self) -> float:
        return abs(self.p)

    @property
    def dqw_realizable(self) -> bool:
        return bool(np.all(self.phi.imag == 0))

    def density(self, y):
        return grover_density(self, y)

    def _t_integrand(self, t):
        # f(y) dy with y = |p| sin t
        p = self.p
        y = abs(p) * np.sin(t)
        poly = p * p * self.d0 + p * self.d1 * y + self.d2 * y * y
        return math.sqrt(1 - p * p) * poly / (2 * math.pi * p * p * (1 - y * y))

    def cdf_continuous(self, y):
        return _cdf_by_substitution(self._t_integrand, abs(self.p), y)

    def continuous_mass(self) -> float:
        t = _t_grid()
        return float(trapezoid(self._t_integrand(t), t))

    def moment(self, r: int) -> float:
        """``A 0^r + int y^r f(y) dy``."""
        t = _t_grid()
        cont = float(trapezoid(self._t_integrand(t) * (abs(self.p) * np.sin(t)) ** r, t))
        return (self.a_coeff if r == 0 else 0.0) + cont

    def header(self) -> dict:
        return {
            "delta": self.delta,
            "p": self.p,
            "q": self.q,
            "d0": self.d0,
            "d1": self.d1,
            "d2": self.d2,
            "A": self.a_coeff,
            "support": self.support,
            "dqw_realizable": self.dqw_realizable,
        }


def grover_limit(delta: float, phi: ArrayLike, tol: Tolerance = DEFAULT_TOL) -> GroverLimit:
    """
    Limit measure for ``delta`` away from the four special angles.

    At ``pi/4, -3pi/4`` use :func:`exact_state_B`; at ``3pi/4, -pi/4`` use
    :func:`exact_state_C`. Those angles raise :class:`DomainError`.
    """
    tag = special_angle(delta)
    if tag is not None:
        raise DomainError(
            f"delta={delta!r} is a special angle with no weak-limit density; "
            f"use exact_state_{tag} (CLI: dqwalk exact) for closed-form states"
        )
    v = as_vector(phi, size=4)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1) > tol.prob_tol:
        raise ValidationError(f"initial vector has norm {norm:.17g}; expected 1")
    p, q = grover_p(delta), grover_q(delta)
    f1, f2, f3, f4 = v
    d0 = abs(f1 - f2) ** 2 + abs(f3 - f4) ** 2
    d1 = p * (abs(f2 - f4) ** 2 - abs(f1 - f3) ** 2) + q * (abs(f2 + f3) ** 2 - abs(f1 + f4) ** 2)
    d2 = (
        p * q * (abs(f1 + f2) ** 2 - abs(f3 + f4) ** 2)
        + 2 * p * p * ((f1 - f4).conjugate() * (f2 - f3)).real
        + 2 * q * q * ((f1 + f3).conjugate() * (f2 + f4)).real
    )
    a = 1 - d0 / 2 - (1 - math.sqrt(1 - p * p)) / (2 * p * p) * d2
    return GroverLimit(float(wrap_angle(delta)), v, p, q, float(d0), float(d1), float(d2), float(a))


def grover_density(gl: GroverLimit, x):
    """Continuous part ``f(x)``; 0 for ``|x| >= |p|``."""
    p = gl.p
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < abs(p)
    xs = np.where(inside, x, 0.0)
    poly = p * p * gl.d0 + p * gl.d1 * xs + gl.d2 * xs * xs
    val = math.sqrt(1 - p * p) * poly / (2 * math.pi * p * p * np.sqrt(p * p - xs * xs) * (1 - xs * xs))
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def limit_moments(delta: float, phi: ArrayLike, r: int, n_k: int = N_K, tol: float = 1e-9) -> float:
    """
    ``lim E[(X_n/n)^r]`` as a momentum integral of ``(D lambda_j / lambda_j)^r |<v_j|phi>|^2``.

    The trapezoid rule on the periodic grid is compared with the half grid;
    disagreement beyond ``tol`` raises :class:`NumericalError`.
    """
    if r < 0:
        raise ValidationError("moment order must be >= 0")
    v = as_vector(phi, size=4)

    def integral(nk: int) -> float:
        ks = momentum_grid(nk)
        w = grover_projections(delta, v, ks)
        g = grover_log_derivatives(delta, ks)
        return float(np.mean(np.sum(g**r * w, axis=1)))

    fine = integral(n_k)
    coarse = integral(n_k // 2)
    if abs(fine - coarse) > tol:
        raise NumericalError(
            f"momentum quadrature not converged for r={r}: {fine!r} vs {coarse!r} on the half grid"
        )
    return fine


# ---------------------------------------------------------------- exact states


def _sparse_state(n: int, sites: list[tuple[int, np.ndarray]]) -> WalkState:
    """Dense state over ``-n .. n``; contributions at coinciding sites add up."""
    amps = np.zeros((2 * n + 1, 4), dtype=np.complex128)
    for x, vec in sites:
        amps[x + n] += vec
    return WalkState(-n, amps)


def exact_state_B(n: int, delta: float, phi: ArrayLike) -> WalkState:
    """State at time n for ``delta`` in {pi/4, -3pi/4}; period 4."""
    if special_angle(delta) != "B":
        raise DomainError(f"exact_state_B needs delta in {{pi/4, -3pi/4}}, got {delta!r}")
    if n < 0:
        raise ValidationError("step count must be >= 0")
    f1, f2, f3, f4 = as_vector(phi, size=4)
    s = 0.5 if abs(wrap_angle(delta) - 0.25 * math.pi) <= 1e-12 else -0.5
    r = n % 4
    if r == 0:
        sites = [(0, np.array([f1, f2, f3, f4]))]
    elif r == 1:
        sites = [
            (-1, s * np.array([f1 + f2 - f3 + f4, 0, f1 - f2 - f3 - f4, 0])),
            (1, s * np.array([0, f1 + f2 + f3 - f4, 0, -f1 + f2 - f3 - f4])),
        ]
    elif r == 2:
        sites = [
            (-2, 0.5 * np.array([f2 + f4, 0, f2 + f4, 0])),
            (0, 0.5 * np.array([f2 - f4, f1 - f3, f4 - f2, f3 - f1])),
            (2, 0.5 * np.array([0, f1 + f3, 0, f1 + f3])),
        ]
    else:
        sites = [
            (-1, s * np.array([f2 - f4, f2 + f4, f2 - f4, -f2 - f4])),
            (1, s * np.array([f1 + f3, f1 - f3, -f1 - f3, f1 - f3])),
        ]
    return _sparse_state(n, sites)


def exact_state_C(n: int, delta: float, phi: ArrayLike) -> WalkState:
    """State at time n for ``delta`` in {3pi/4, -pi/4}: ballistic edges plus a trapped part."""
    if special_angle(delta) != "C":
        raise DomainError(f"exact_state_C needs delta in {{3pi/4, -pi/4}}, got {delta!r}")
    if n < 0:
        raise ValidationError("step count must be >= 0")
    f1, f2, f3, f4 = as_vector(phi, size=4)
    left = 0.5 * np.array([f1 - f3, 0, f3 - f1, 0])
    right = 0.5 * np.array([0, f2 - f4, 0, f4 - f2])
    if n % 2 == 0:
        centre = 0.5 * np.array([f1 + f3, f2 + f4, f1 + f3, f2 + f4])
        return _sparse_state(n, [(-n, left), (0, centre), (n, right)])
    s = 1.0 if abs(wrap_angle(delta) + 0.25 * math.pi) <= 1e-12 else -1.0
    sites = [
        (-n, s * left),
        (-1, -s * 0.5 * np.array([f2 + f4, 0, f2 + f4, 0])),
        (1, -s * 0.5 * np.array([0, f1 + f3, 0, f1 + f3])),
        (n, s * right),
    ]
    return _sparse_state(n, sites)


def exact_state(n: int, delta: float, phi: ArrayLike) -> WalkState:
    tag = special_angle(delta)
    if tag == "B":
        return exact_state_B(n, delta, phi)
    if tag == "C":
        return exact_state_C(n, delta, phi)
    raise DomainError(f"no closed-form state for delta={delta!r}; only pi/4, -3pi/4, 3pi/4, -pi/4")
