"""
Momentum-space analysis of 4-state walks.

With ``Psi_hat(k) = sum_x exp(-ikx) psi(x)`` one step acts as
``Psi_hat <- U(k) Psi_hat`` where ``U(k) = diag(e^{ik}, e^{-ik}, e^{ik}, e^{-ik}) M``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from .decompose import PairParams, grover_family_matrix, lift_coin, pair_from_params, wrap_angle
from .numerics import NumericalError, as_matrix

__all__ = [
    "fourier_coin",
    "momentum_grid",
    "CharPoly",
    "char_poly_numeric",
    "char_poly_grover_family",
    "Lemma2Case",
    "Lemma2Conditions",
    "lemma2_conditions",
    "classify_lemma2",
    "has_pm1_eigenvalues",
    "NumericEigen",
    "numeric_eigensystem",
    "EigenSystem",
    "grover_p",
    "grover_q",
    "grover_eigenvalues",
    "grover_log_derivatives",
    "eigen_system_grover_family",
    "grover_projections",
    "eigensystem_for_params",
    "RESIDUAL_TOL",
]

RESIDUAL_TOL = 1e-9


def fourier_coin(coin: ArrayLike, k: float) -> NDArray[np.complex128]:
    m = as_matrix(coin, size=4)
    ph = np.exp(1j * k)
    d = np.array([ph, ph.conjugate(), ph, ph.conjugate()])
    return as_matrix(d[:, None] * m)


def momentum_grid(n: int = 64) -> NDArray[np.float64]:
    """``n`` uniform points on ``[-pi, pi)``."""
    return -np.pi + 2 * np.pi * np.arange(n) / n


@dataclass(frozen=True)
class CharPoly:
    """Monic quartic, coefficients highest degree first."""

    coeffs: NDArray[np.complex128]

    @property
    def a(self) -> complex:
        """Coefficient of x^3."""
        return complex(self.coeffs[1])

    def __call__(self, x):
        return np.polyval(self.coeffs, x)


def char_poly_numeric(m: ArrayLike) -> CharPoly:
    """``det(xI - m)`` by the Faddeev-LeVerrier recursion."""
    m = np.asarray(m, dtype=np.complex128)
    n = m.shape[0]
    coeffs = [1.0 + 0j]
    mk = np.zeros_like(m)
    eye = np.eye(n)
    for k in range(1, n + 1):
        mk = m @ mk + coeffs[-1] * eye
        coeffs.append(-np.trace(m @ mk) / k)
    return CharPoly(np.array(coeffs))


def char_poly_grover_family(p: PairParams, k: float) -> CharPoly:
    """
    Closed-form characteristic polynomial of ``U(k)`` for a parametrized pair.

    ``x^4 + A x^3 + B x^2 - conj(A) x - 1`` with ``B`` purely imaginary.
    """
    ra, rb = abs(p.alpha), abs(p.beta)
    th, ph, d, e, f = p.theta, p.phi, p.delta, p.e, p.f
    cd, sd = math.cos(d), math.sin(d)
    a_re = -2 * math.cos(k) * (ra * (cd * math.cos(th) - e * sd * math.sin(th)) - f * rb * sd * math.sin(ph))
    a_im = -2 * math.sin(k) * (ra * (e * cd * math.cos(th) - sd * math.sin(th)) + f * rb * cd * math.cos(ph))
    a = complex(a_re, a_im)
    b = 2j * ra * math.sin(2 * k) * (e * ra + f * rb * math.cos(th - ph))
    return CharPoly(np.array([1, a, b, -a.conjugate(), -1], dtype=np.complex128))


class Lemma2Case(str, enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"
    NONE = "none"


@dataclass(frozen=True)
class Lemma2Conditions:
    """
    Residuals of the two identities that put both 1 and -1 in the spectrum of
    ``U(k)`` for every k: the x^2 coefficient and ``Im A`` vanish identically.
    """

    quadratic: float  # |alpha| (e|alpha| + f|beta| cos(theta - phi))
    imag_a: float  # |alpha|(e cos d cos theta - sin d sin theta) + f|beta| cos d cos phi

    def holds(self, tol: float) -> bool:
        return abs(self.quadratic) <= tol and abs(self.imag_a) <= tol


def lemma2_conditions(p: PairParams) -> Lemma2Conditions:
    ra, rb = abs(p.alpha), abs(p.beta)
    th, ph, d, e, f = p.theta, p.phi, p.delta, p.e, p.f
    quad = ra * (e * ra + f * rb * math.cos(th - ph))
    ima = ra * (e * math.cos(d) * math.cos(th) - math.sin(d) * math.sin(th)) + f * rb * math.cos(d) * math.cos(ph)
    return Lemma2Conditions(quad, ima)


def classify_lemma2(p: PairParams, tol: float = 1e-10) -> Lemma2Case:
    """
    First matching case of the four-way classification, else ``NONE``.

    The printed case list uses symbols ``a`` and ``b``; they are read as
    ``e`` and ``f``, which makes each case a specialization of
    :func:`lemma2_conditions`.
    """
    ra, rb = abs(p.alpha), abs(p.beta)
    th, ph, d, e, f = p.theta, p.phi, p.delta, p.e, p.f
    zero = lambda v: abs(v) <= tol  # noqa: E731
    if zero(ra):
        if zero(f * math.cos(ph) * math.cos(d)):
            return Lemma2Case.CASE1
        return Lemma2Case.NONE
    if zero(rb):
        if zero(e) and zero(math.sin(th) * math.sin(d)):
            return Lemma2Case.CASE2
        return Lemma2Case.NONE
    if zero(f):
        return Lemma2Case.NONE
    # cos(theta - phi) = -e|alpha| / (f|beta|), multiplied through by f|beta|
    if not zero(f * rb * math.cos(th - ph) + e * ra):
        return Lemma2Case.NONE
    if zero(math.sin(th)):
        return Lemma2Case.CASE3
    # tan d = (|alpha| e cos theta + f|beta| cos phi) / (|alpha| sin theta), cos d != 0
    if not zero(math.cos(d)):
        num = ra * e * math.cos(th) + f * rb * math.cos(ph)
        den = ra * math.sin(th)
        if zero(math.sin(d) * den - math.cos(d) * num):
            return Lemma2Case.CASE4
    return Lemma2Case.NONE


@dataclass(frozen=True)
class NumericEigen:
    values: NDArray[np.complex128]
    vectors: NDArray[np.complex128]  # columns, orthonormal


def _gauge(v: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Unit norm, first non-negligible component real and positive."""
    v = v / np.linalg.norm(v)
    idx = int(np.argmax(np.abs(v) > 1e-8))
    return v * (abs(v[idx]) / v[idx])


def numeric_eigensystem(m: ArrayLike) -> NumericEigen:
    """
    Eigen-decomposition of a normal matrix via the complex Schur form.

    For a unitary matrix the triangular factor is diagonal, so the Schur
    vectors are an orthonormal eigenbasis even for repeated eigenvalues.
    """
    m = np.asarray(m, dtype=np.complex128)
    t, z = scipy.linalg.schur(m, output="complex")
    vals = np.diag(t).copy()
    vecs = np.column_stack([_gauge(z[:, j]) for j in range(m.shape[0])])
    return NumericEigen(vals, vecs)


def has_pm1_eigenvalues(coin: ArrayLike, ks=None, tol: float = 1e-8) -> tuple[bool, float, float]:
    """
    Whether ``U(k)`` has both 1 and -1 among its eigenvalues at every k.

    Returns ``(verdict, max_k dist(eigs, 1), max_k dist(eigs, -1))``.
    """
    ks = momentum_grid() if ks is None else ks
    worst_p = worst_m = 0.0
    for k in ks:
        vals = scipy.linalg.eigvals(fourier_coin(coin, k))
        worst_p = max(worst_p, float(np.min(np.abs(vals - 1))))
        worst_m = max(worst_m, float(np.min(np.abs(vals + 1))))
    return (worst_p <= tol and worst_m <= tol), worst_p, worst_m


# Grover family


def grover_p(delta: float) -> float:
    """``(cos d - sin d) / sqrt(2)``, evaluated as ``cos(d + pi/4)`` so that |p| = 1 is exact."""
    return math.cos(delta + 0.25 * math.pi)


def grover_q(delta: float) -> float:
    """``(cos d + sin d) / sqrt(2)``."""
    return math.cos(delta - 0.25 * math.pi)


def grover_eigenvalues(delta: float, k):
    """Eigenvalues ``(1, -1, lambda_3, lambda_4)``; ``k`` may be an array."""
    p = grover_p(delta)
    k = np.asarray(k, dtype=float)
    c = p * np.cos(k)
    s = np.sqrt(np.clip(1 - c * c, 0.0, None))
    one = np.ones_like(c)
    return np.stack([one + 0j, -one + 0j, c + 1j * s, c - 1j * s], axis=-1)


def grover_log_derivatives(delta: float, k):
    """``i lambda'(k) / lambda(k)`` for the four eigenvalues."""
    p = grover_p(delta)
    k = np.asarray(k, dtype=float)
    s = np.sqrt(np.clip(1 - (p * np.cos(k)) ** 2, 0.0, None))
    num = -p * np.sin(k)
    with np.errstate(invalid="ignore", divide="ignore"):
        g = np.where(s > 0, num / np.where(s > 0, s, 1.0), 0.0)
    zero = np.zeros_like(g)
    return np.stack([zero, zero, g, -g], axis=-1)


def _is_ballistic(delta: float) -> bool:
    """Closed-form eigenvectors are not defined at 3pi/4 and -pi/4."""
    d = wrap_angle(delta)
    return any(math.isclose(d, t, abs_tol=1e-12) for t in (0.75 * math.pi, -0.25 * math.pi))


def _closed_form_vectors(delta: float, k, lam3, lam4):
    """Unnormalized eigenvectors for lambda_3, lambda_4 from the x1..x4 products."""
    r2 = math.sqrt(2)
    sd, cd = r2 * math.sin(delta), r2 * math.cos(delta)
    eik = np.exp(1j * np.asarray(k, dtype=float))
    out = []
    for lam in (lam3, lam4):
        x1 = lam * eik + sd
        x2 = eik.conjugate() / lam - cd
        x3 = eik / lam + sd
        x4 = lam * eik.conjugate() - cd
        out.append(np.stack([x1 * x2 * x3, x1.conjugate() * x3 * x4, x1 * x2 * x4.conjugate(), x2 * x3 * x4], axis=-1))
    return out


def _null_vector(m: NDArray[np.complex128]) -> NDArray[np.complex128]:
    return np.linalg.svd(m)[2][-1].conj()


@dataclass(frozen=True)
class EigenSystem:
    """
    Eigen-pairs of ``U(k)`` ordered as ``(1, -1, lambda_3, lambda_4)``.

    ``vectors[:, j]`` is the unit eigenvector for ``values[j]``.
    """

    k: float
    values: NDArray[np.complex128]
    vectors: NDArray[np.complex128]
    log_derivatives: NDArray[np.float64]
    method: str

    def residuals(self, coin: ArrayLike) -> NDArray[np.float64]:
        u = fourier_coin(coin, self.k)
        return np.linalg.norm(u @ self.vectors - self.vectors * self.values, axis=0)


def _match_numeric(u, values):
    """Schur eigen-pairs reordered to line up with the closed-form eigenvalues."""
    num = numeric_eigensystem(u)
    best = list(min(
        itertools.permutations(range(4)),
        key=lambda perm: sum(abs(num.values[perm[j]] - values[j]) for j in range(4)),
    ))
    return num.values[best], num.vectors[:, best]


def eigen_system_grover_family(delta: float, k: float) -> EigenSystem:
    """
    Closed-form eigen-system of the Grover-family ``U(k)``.

    Eigenvectors for ``lambda_3,4`` come from the x1..x4 products; for
    ``+-1`` they are the null vectors of ``U(k) -+ I``. When a closed form
    degenerates (or at ``delta`` in {3pi/4, -pi/4}) the Schur eigenbasis is
    used instead. Raises :class:`NumericalError` if any residual exceeds 1e-9.
    """
    u = fourier_coin(grover_family_matrix(delta), k)
    values = grover_eigenvalues(delta, k)
    logd = grover_log_derivatives(delta, k)
    method = "closed-form"
    vectors = None
    if not _is_ballistic(delta):
        v3, v4 = _closed_form_vectors(delta, k, values[2], values[3])
        n3, n4 = np.linalg.norm(v3), np.linalg.norm(v4)
        if min(n3, n4) > 1e-8 and abs(values[2] - values[3]) > 1e-8:
            v1 = _null_vector(u - np.eye(4))
            v2 = _null_vector(u + np.eye(4))
            vectors = np.column_stack([_gauge(v1), _gauge(v2), _gauge(v3), _gauge(v4)])
    if vectors is None:
        method = "numeric"
        values, vectors = _match_numeric(u, values)
    es = EigenSystem(float(k), values, vectors, logd, method)
    res = es.residuals(grover_family_matrix(delta))
    if np.max(res) > RESIDUAL_TOL:
        raise NumericalError(f"eigen-pair residual {np.max(res):.3g} exceeds {RESIDUAL_TOL} at k={k}")
    return es


def grover_projections(delta: float, phi: ArrayLike, ks) -> NDArray[np.float64]:
    """
    ``|<v_j(k)|phi>|^2`` for every k in ``ks`` and j = 1..4, shape (len(ks), 4).

    Vectorized closed forms for ``lambda_3,4``; the ``+-1`` weights follow from
    completeness. Degenerate momenta fall back to :func:`eigen_system_grover_family`.
    """
    phi = np.asarray(phi, dtype=np.complex128)
    ks = np.asarray(ks, dtype=float)
    out = np.empty((ks.size, 4))
    if _is_ballistic(delta):
        for i, k in enumerate(ks):
            es = eigen_system_grover_family(delta, k)
            out[i] = np.abs(es.vectors.conj().T @ phi) ** 2
        return out
    lam = grover_eigenvalues(delta, ks)
    v3, v4 = _closed_form_vectors(delta, ks, lam[:, 2], lam[:, 3])
    n3 = np.linalg.norm(v3, axis=1)
    n4 = np.linalg.norm(v4, axis=1)
    ok = (n3 > 1e-8) & (n4 > 1e-8)
    w3 = np.abs(v3.conj() @ phi) ** 2 / np.where(ok, n3, 1.0) ** 2
    w4 = np.abs(v4.conj() @ phi) ** 2 / np.where(ok, n4, 1.0) ** 2
    # weight on +1 from the batched null vectors of U(k) - I; -1 takes the rest
    eik = np.exp(1j * ks)
    phase = np.stack([eik, eik.conj(), eik, eik.conj()], axis=-1)
    u = phase[:, :, None] * grover_family_matrix(delta)[None, :, :]
    v1 = np.linalg.svd(u - np.eye(4))[2][:, -1, :].conj()
    out[:, 0] = np.abs(v1.conj() @ phi) ** 2
    out[:, 2] = w3
    out[:, 3] = w4
    out[:, 1] = np.vdot(phi, phi).real - out[:, 0] - w3 - w4
    for i in np.flatnonzero(~ok):
        es = eigen_system_grover_family(delta, ks[i])
        out[i] = np.abs(es.vectors.conj().T @ phi) ** 2
    return out


def eigensystem_for_params(p: PairParams, k: float) -> NumericEigen:
    """Numeric eigen-decomposition of ``U(k)`` for a general parametrized pair."""
    return numeric_eigensystem(fourier_coin(lift_coin(pair_from_params(p)), k))

