"""
Time evolution of walks on the integer line.

Three models share one state container:

- ``lqw2``: 2-state linear walk, ``(U psi)(x) = P psi(x+1) + Q psi(x-1)``.
- ``dqw``: 2-state decomposed walk; ``M_R`` acts on the real part of the
  amplitudes and ``M_I`` on the imaginary part before the shift.
- ``lqw4``: 4-state linear walk; components 1 and 3 move left, 2 and 4 right.

States are stored densely over the reachable window. A walk started at the
origin and run for n steps occupies positions ``-n .. n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    ValidationError,
    as_matrix,
    as_vector,
    unitary_deviation,
)

__all__ = [
    "WalkState",
    "Distribution",
    "Model",
    "initial_state",
    "step_lqw2",
    "step_dqw",
    "step_lqw4",
    "evolve",
    "trajectory",
    "measure",
]

Model = Literal["lqw2", "dqw", "lqw4"]

# component indices moving left (towards x-1) under the shift
_LEFT = {2: [0], 4: [0, 2]}
_RIGHT = {2: [1], 4: [1, 3]}


@dataclass(frozen=True)
class WalkState:
    """
    Finitely supported walk state.

    Attributes
    ----------
    offset : int
        Lattice position of ``amplitudes[0]``.
    amplitudes : ndarray, shape (L, d)
        One d-component complex vector per site, d in {2, 4}.
    """

    offset: int
    amplitudes: NDArray[np.complex128]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or amps.shape[1] not in (2, 4) or amps.shape[0] == 0:
            raise ValidationError(f"amplitudes must have shape (L, 2|4), got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValidationError("state has non-finite amplitudes")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "offset", int(self.offset))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.offset, self.offset + self.amplitudes.shape[0])

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def at(self, x: int) -> NDArray[np.complex128]:
        """Amplitude vector at site x (zeros outside the stored window)."""
        i = x - self.offset
        if 0 <= i < self.amplitudes.shape[0]:
            return self.amplitudes[i]
        return np.zeros(self.dim, dtype=np.complex128)

    def padded(self, lo: int, hi: int) -> "WalkState":
        """Same state stored over positions ``lo .. hi`` (must cover the support)."""
        L = hi - lo + 1
        out = np.zeros((L, self.dim), dtype=np.complex128)
        src = self.positions
        keep = (src >= lo) & (src <= hi)
        if np.any(np.abs(self.amplitudes[~keep]) > 0):
            raise ValidationError("padding window would drop non-zero amplitudes")
        out[src[keep] - lo] = self.amplitudes[keep]
        return WalkState(lo, out)

    def allclose(self, other: "WalkState", atol: float) -> bool:
        if self.dim != other.dim:
            return False
        lo = min(self.offset, other.offset)
        hi = max(self.positions[-1], other.positions[-1])
        a = self.padded(lo, hi).amplitudes
        b = other.padded(lo, hi).amplitudes
        return bool(np.max(np.abs(a - b)) <= atol)


@dataclass(frozen=True)
class Distribution:
    """Probability masses ``masses[i]`` at position ``offset + i``."""

    offset: int
    masses: NDArray[np.float64]

    def __post_init__(self):
        m = np.array(self.masses, dtype=np.float64).reshape(-1)
        m.setflags(write=False)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "offset", int(self.offset))

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.offset, self.offset + self.masses.shape[0])

    def __getitem__(self, x: int) -> float:
        i = x - self.offset
        if 0 <= i < self.masses.shape[0]:
            return float(self.masses[i])
        return 0.0

    def total(self) -> float:
        return float(self.masses.sum())

    def moment(self, r: int, scale: float = 1.0) -> float:
        """``E[(X / scale)^r]``."""
        return float(np.sum((self.positions / scale) ** r * self.masses))

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> "Distribution":
        if abs(self.total() - 1.0) > tol.prob_tol:
            raise ValidationError(f"masses sum to {self.total():.17g}, not 1")
        if np.any(self.masses < -tol.prob_tol):
            raise ValidationError("negative probability mass")
        return self


def initial_state(phi: ArrayLike, tol: Tolerance = DEFAULT_TOL) -> WalkState:
    """State ``phi`` at the origin. Non-normalized vectors are rejected."""
    v = as_vector(phi)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol.prob_tol:
        raise ValidationError(f"initial vector has norm {norm:.17g}; expected 1")
    return WalkState(0, v.reshape(1, -1))


def _shift(coined: NDArray[np.complex128], offset: int) -> WalkState:
    L, d = coined.shape
    out = np.zeros((L + 2, d), dtype=np.complex128)
    left, right = _LEFT[d], _RIGHT[d]
    out[:L, left] = coined[:, left]
    out[2:, right] = coined[:, right]
    return WalkState(offset - 1, out)


def _check_coin(coin: ArrayLike, size: int, tol: Tolerance) -> NDArray[np.complex128]:
    m = as_matrix(coin, size=size)
    dev = unitary_deviation(m)
    if dev > tol.eq_tol:
        raise ValidationError(f"coin is not unitary (max |M*M - I| = {dev:.3g})")
    return m


def _check_pair(pair, tol: Tolerance):
    from .decompose import CoinPair

    if isinstance(pair, CoinPair):
        return pair
    m_r, m_i = pair
    return CoinPair(m_r, m_i, tol=tol)


def _require_dim(state: WalkState, d: int) -> None:
    if state.dim != d:
        raise ValidationError(f"expected a {d}-component state, got {state.dim}")


def _apply_lqw(state: WalkState, coin: NDArray[np.complex128]) -> WalkState:
    return _shift(state.amplitudes @ coin.T, state.offset)


def _apply_dqw(state: WalkState, m_r, m_i) -> WalkState:
    amps = state.amplitudes
    coined = amps.real @ m_r.T + 1j * (amps.imag @ m_i.T)
    return _shift(coined, state.offset)


def step_lqw2(state: WalkState, coin: ArrayLike, tol: Tolerance = DEFAULT_TOL) -> WalkState:
    """One step of the 2-state linear walk."""
    _require_dim(state, 2)
    return _apply_lqw(state, _check_coin(coin, 2, tol))


def step_dqw(state: WalkState, pair, tol: Tolerance = DEFAULT_TOL) -> WalkState:
    """
    One step of the decomposed walk.

    ``pair`` is a :class:`~dqwalk.decompose.CoinPair` or an ``(M_R, M_I)``
    tuple; tuples are validated and rejected if the coin is not an isometry.
    """
    _require_dim(state, 2)
    pair = _check_pair(pair, tol)
    return _apply_dqw(state, pair.m_r, pair.m_i)


def step_lqw4(state: WalkState, coin: ArrayLike, tol: Tolerance = DEFAULT_TOL) -> WalkState:
    """One step of the 4-state linear walk."""
    _require_dim(state, 4)
    return _apply_lqw(state, _check_coin(coin, 4, tol))


def trajectory(
    model: Model,
    initial: WalkState | ArrayLike,
    coin,
    n: int,
    tol: Tolerance = DEFAULT_TOL,
) -> Iterator[WalkState]:
    """
    Yield the states at times ``0, 1, ..., n``.

    ``coin`` is a 2x2 matrix for ``lqw2``, a CoinPair or ``(M_R, M_I)`` for
    ``dqw`` and a 4x4 matrix for ``lqw4``. Validation happens once, up front.
    """
    if n < 0:
        raise ValidationError(f"step count must be >= 0, got {n}")
    state = initial if isinstance(initial, WalkState) else initial_state(initial, tol)
    if model == "lqw2":
        _require_dim(state, 2)
        m = _check_coin(coin, 2, tol)
        step = lambda s: _apply_lqw(s, m)  # noqa: E731
    elif model == "dqw":
        _require_dim(state, 2)
        pair = _check_pair(coin, tol)
        step = lambda s: _apply_dqw(s, pair.m_r, pair.m_i)  # noqa: E731
    elif model == "lqw4":
        _require_dim(state, 4)
        m = _check_coin(coin, 4, tol)
        step = lambda s: _apply_lqw(s, m)  # noqa: E731
    else:
        raise ValidationError(f"unknown model {model!r}")
    yield state
    for _ in range(n):
        state = step(state)
        yield state


def evolve(
    model: Model,
    initial: WalkState | ArrayLike,
    coin,
    n: int,
    tol: Tolerance = DEFAULT_TOL,
) -> WalkState:
    """State after exactly ``n`` steps."""
    state = None
    for state in trajectory(model, initial, coin, n, tol):
        pass
    return state


def measure(state: WalkState) -> Distribution:
    """Per-site squared norms ``mu(x) = ||psi(x)||^2``."""
    return Distribution(state.offset, np.sum(np.abs(state.amplitudes) ** 2, axis=1))
