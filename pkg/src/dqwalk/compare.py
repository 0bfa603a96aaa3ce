"""
Finite-time distributions against limit measures.

Positions are rescaled by time, ``y = x / n``. A window ``|x| <= eps n``
around the origin is set aside: its mass estimates the atom ``A`` of the
limit and is excluded from the binned L1 comparison, which runs over bins of
width ``h`` tiling ``eps < |y| <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .walk import Distribution

__all__ = ["ComparisonReport", "window_halfwidth", "localization_mass", "binned_masses", "compare"]

DEFAULT_BIN_WIDTH = 0.05
DEFAULT_EPSILON = 0.02


def window_halfwidth(n: int, epsilon: float) -> int:
    """Largest integer ``w`` with ``w <= epsilon * n``."""
    return int(math.floor(epsilon * n + 1e-9))


def _window_mass(dist: Distribution, n: int, epsilon: float) -> float:
    w = window_halfwidth(n, epsilon)
    return float(dist.masses[np.abs(dist.positions) <= w].sum())


def localization_mass(dist_n: Distribution, dist_n1: Distribution, n: int, epsilon: float = DEFAULT_EPSILON) -> float:
    """Window mass averaged over times n and n+1 (damps parity oscillation)."""
    return 0.5 * (_window_mass(dist_n, n, epsilon) + _window_mass(dist_n1, n + 1, epsilon))


def _bin_edges(bin_width: float, epsilon: float) -> np.ndarray:
    nb = int(math.ceil((1.0 - epsilon) / bin_width - 1e-9))
    edges = epsilon + bin_width * np.arange(nb + 1)
    edges[-1] = 1.0  # the last bin may be narrower
    return edges


def binned_masses(dist: Distribution, n: int, limit, bin_width: float = DEFAULT_BIN_WIDTH, epsilon: float = DEFAULT_EPSILON):
    """
    Empirical and predicted masses per bin outside the origin window.

    Returns ``(lo, hi, empirical, predicted)`` with bins ordered from left to
    right. Positive bins are ``(lo, hi]``, negative bins ``[lo, hi)``.
    """
    edges = _bin_edges(bin_width, epsilon)
    nb = edges.size - 1
    x = dist.positions
    w = window_halfwidth(n, epsilon)
    emp_pos = np.zeros(nb)
    emp_neg = np.zeros(nb)
    outside = np.abs(x) > w
    # index from the integer offset so bin edges are not subject to rounding
    idx = np.ceil((np.abs(x) - epsilon * n) / (bin_width * n) - 1e-9).astype(int) - 1
    idx = np.clip(idx, 0, nb - 1)
    np.add.at(emp_pos, idx[outside & (x > 0)], dist.masses[outside & (x > 0)])
    np.add.at(emp_neg, idx[outside & (x < 0)], dist.masses[outside & (x < 0)])
    cdf = limit.cdf_continuous
    pred_pos = cdf(edges[1:]) - cdf(edges[:-1])
    pred_neg = cdf(-edges[:-1]) - cdf(-edges[1:])
    lo = np.concatenate([-edges[:0:-1], edges[:-1]])
    hi = np.concatenate([-edges[-2::-1], edges[1:]])
    emp = np.concatenate([emp_neg[::-1], emp_pos])
    pred = np.concatenate([pred_neg[::-1], pred_pos])
    return lo, hi, emp, pred


@dataclass(frozen=True)
class ComparisonReport:
    n: int
    bin_width: float
    epsilon: float
    l1: float
    sup: float  # largest per-bin gap, in density units
    localization_mass: float
    predicted_atom: float
    window_continuous_mass: float
    moments: list[tuple[int, float, float]] = field(default_factory=list)

    @property
    def mass_error(self) -> float:
        return abs(self.localization_mass - self.predicted_atom)

    def passed(self, max_l1: float | None = None, max_mass_error: float | None = None) -> bool:
        ok = max_l1 is None or self.l1 <= max_l1
        return ok and (max_mass_error is None or self.mass_error <= max_mass_error)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "bin_width": self.bin_width,
            "epsilon": self.epsilon,
            "l1": self.l1,
            "sup": self.sup,
            "localization_mass": self.localization_mass,
            "predicted_A": self.predicted_atom,
            "mass_error": self.mass_error,
            "window_continuous_mass": self.window_continuous_mass,
            "moments": [{"r": r, "empirical": e, "limit": lim} for r, e, lim in self.moments],
        }


def compare(
    dist_n: Distribution,
    dist_n1: Distribution,
    n: int,
    limit,
    bin_width: float = DEFAULT_BIN_WIDTH,
    epsilon: float = DEFAULT_EPSILON,
) -> ComparisonReport:
    """
    Compare the distributions at times n and n+1 with a limit measure.

    ``limit`` needs ``atom``, ``cdf_continuous`` and ``moment`` (both
    :class:`~dqwalk.limits.GroverLimit` and :class:`~dqwalk.limits.KonnoLimit` do).
    """
    if n < 1:
        raise ValueError("comparison needs n >= 1")
    if not (bin_width > 0 and 0 <= epsilon < 1):
        raise ValueError("need bin_width > 0 and 0 <= epsilon < 1")
    lo, hi, emp, pred = binned_masses(dist_n, n, limit, bin_width, epsilon)
    diff = np.abs(emp - pred)
    window_cont = float(limit.cdf_continuous(epsilon) - limit.cdf_continuous(-epsilon))
    moments = [(r, dist_n.moment(r, scale=n), float(limit.moment(r))) for r in range(1, 5)]
    return ComparisonReport(
        n=n,
        bin_width=bin_width,
        epsilon=epsilon,
        l1=float(diff.sum()),
        sup=float(np.max(diff / (hi - lo))),
        localization_mass=localization_mass(dist_n, dist_n1, n, epsilon),
        predicted_atom=float(limit.atom),
        window_continuous_mass=window_cont,
        moments=moments,
    )
