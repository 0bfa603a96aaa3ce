"""
Experiment configuration: one JSON document per experiment.

Complex numbers are ``[re, im]`` pairs (a bare number is read as real).
Angles are numbers in radians or strings such as ``"0.75pi"``, ``"-pi/6"``,
``"3pi/4"``. Example::

    {
      "model": "grover-family",
      "delta": "0.5pi",
      "initial": [0.5, 0.5, 0.5, 0.5],
      "steps": 1000,
      "compare": {"bin_width": 0.05, "epsilon": 0.02, "max_l1": 0.05}
    }
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import numpy as np

from .compare import DEFAULT_BIN_WIDTH, DEFAULT_EPSILON
from .decompose import CoinPair, PairParams, grover_family_matrix, grover_family_pair, lift_coin, lift_state, pair_from_params
from .numerics import Tolerance, ValidationError, grover_matrix, hadamard, identity, pauli_x
from .walk import WalkState, initial_state

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "parse_angle",
    "parse_complex",
    "parse_vector",
    "parse_matrix",
    "parse_params",
    "parse_pair",
    "load_json",
    "MODELS",
]

MODELS = ("lqw2", "dqw", "lqw4", "grover-family")

NAMED_COINS = {
    "hadamard": hadamard,
    "x": pauli_x,
    "pauli-x": pauli_x,
    "identity": lambda: identity(2),
    "identity4": lambda: identity(4),
    "grover": grover_matrix,
}

_ANGLE = re.compile(
    r"^\s*(?P<coef>[+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*(?:pi|π)\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$"
)


class ConfigError(ValidationError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


def parse_angle(value: Any, field: str = "delta") -> float:
    if isinstance(value, bool):
        raise ConfigError(field, "expected an angle")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        m = _ANGLE.match(value)
        if m:
            coef = m.group("coef")
            c = 1.0 if coef in ("", "+", None) else (-1.0 if coef == "-" else float(coef))
            out = c * math.pi / (float(m.group("den")) if m.group("den") else 1.0)
        else:
            try:
                out = float(value)
            except ValueError:
                raise ConfigError(field, f"cannot parse angle {value!r} (use radians or e.g. '0.75pi')") from None
    else:
        raise ConfigError(field, f"expected an angle, got {type(value).__name__}")
    if not math.isfinite(out):
        raise ConfigError(field, "angle must be finite")
    return out


def parse_complex(value: Any, field: str) -> complex:
    if isinstance(value, bool):
        raise ConfigError(field, "expected a number or [re, im] pair")
    if isinstance(value, (int, float)):
        z = complex(float(value), 0.0)
    elif isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        z = complex(float(value[0]), float(value[1]))
    else:
        raise ConfigError(field, f"expected a number or [re, im] pair, got {value!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigError(field, "complex entries must be finite")
    return z


def parse_vector(value: Any, field: str, sizes=(2, 4)) -> np.ndarray:
    if not isinstance(value, (list, tuple)) or len(value) not in sizes:
        want = " or ".join(str(s) for s in sizes)
        raise ConfigError(field, f"expected a list of {want} complex entries")
    return np.array([parse_complex(v, f"{field}[{i}]") for i, v in enumerate(value)])


def parse_matrix(value: Any, field: str, size: int | None = None) -> np.ndarray:
    if isinstance(value, str):
        if value not in NAMED_COINS:
            raise ConfigError(field, f"unknown coin name {value!r}; known: {', '.join(sorted(NAMED_COINS))}")
        m = np.array(NAMED_COINS[value]())
    elif isinstance(value, (list, tuple)) and len(value) in (2, 4):
        rows = [parse_vector(row, f"{field}[{i}]", sizes=(len(value),)) for i, row in enumerate(value)]
        m = np.array(rows)
    else:
        raise ConfigError(field, "expected a coin name or a square list of rows")
    if size is not None and m.shape[0] != size:
        raise ConfigError(field, f"expected a {size}x{size} matrix, got {m.shape[0]}x{m.shape[0]}")
    return m


def parse_params(value: Any, field: str = "params") -> PairParams:
    if not isinstance(value, dict):
        raise ConfigError(field, "expected an object with delta, alpha, beta, e, f")
    missing = [k for k in ("delta", "alpha", "beta", "e", "f") if k not in value]
    if missing:
        raise ConfigError(field, f"missing {', '.join(missing)}")
    for k in ("e", "f"):
        if isinstance(value[k], bool) or not isinstance(value[k], (int, float)):
            raise ConfigError(f"{field}.{k}", "expected a real number")
    p = PairParams(
        parse_angle(value["delta"], f"{field}.delta"),
        parse_complex(value["alpha"], f"{field}.alpha"),
        parse_complex(value["beta"], f"{field}.beta"),
        float(value["e"]),
        float(value["f"]),
    )
    try:
        return p.validate()
    except ValidationError as exc:
        raise ConfigError(field, str(exc)) from None


def parse_pair(value: Any, field: str = "pair", tol: Tolerance | None = None) -> CoinPair:
    if not isinstance(value, dict) or "m_r" not in value or "m_i" not in value:
        raise ConfigError(field, "expected an object with m_r and m_i")
    m_r = parse_matrix(value["m_r"], f"{field}.m_r", size=2)
    m_i = parse_matrix(value["m_i"], f"{field}.m_i", size=2)
    try:
        return CoinPair(m_r, m_i, tol=tol or Tolerance())
    except ValidationError as exc:
        raise ConfigError(field, str(exc)) from None


def load_json(path: str | Path) -> dict:
    """Read a JSON document; syntax errors report line and column."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError("", f"{path}: top level must be a JSON object")
    return doc


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A validated experiment.

    ``coin`` holds whatever the walk engine expects for ``sim_model``: a 2x2
    matrix, a :class:`CoinPair`, or a 4x4 matrix.
    """

    model: str
    initial: np.ndarray
    steps: int
    coin: Any
    delta: float | None = None
    params: PairParams | None = None
    bin_width: float = DEFAULT_BIN_WIDTH
    epsilon: float = DEFAULT_EPSILON
    max_l1: float | None = None
    max_mass_error: float | None = None
    tol: Tolerance = Tolerance()

    @property
    def sim_model(self) -> str:
        return "lqw4" if self.model == "grover-family" else self.model

    def initial_state(self) -> WalkState:
        return initial_state(self.initial, self.tol)

    def limit(self):
        """Limit law matching the model, or :class:`ConfigError` when there is none."""
        from .limits import grover_limit, konno_limit

        if self.model == "lqw2":
            return konno_limit(self.coin, self.initial)
        if self.delta is None:
            raise ConfigError(
                "model",
                f"no limit law for model {self.model!r} without a Grover-family 'delta' "
                "(limits exist for lqw2 and the Grover family only)",
            )
        phi = self.initial
        if self.model == "dqw":
            phi = lift_state(self.initial_state()).amplitudes[0]
        return grover_limit(self.delta, phi, self.tol)

    @classmethod
    def from_dict(cls, doc: dict, overrides: dict | None = None) -> "ExperimentConfig":
        doc = {**doc, **{k: v for k, v in (overrides or {}).items() if v is not None}}
        tol = Tolerance(eq_tol=float(doc.get("eq_tol", 1e-12)), prob_tol=float(doc.get("prob_tol", 1e-10)))
        model = doc.get("model")
        if model not in MODELS:
            raise ConfigError("model", f"expected one of {', '.join(MODELS)}, got {model!r}")
        steps = doc.get("steps", 0)
        if isinstance(steps, bool) or not isinstance(steps, int) or steps < 0:
            raise ConfigError("steps", f"expected a non-negative integer, got {steps!r}")
        if "initial" not in doc:
            raise ConfigError("initial", "missing initial vector")
        dim = 2 if model in ("lqw2", "dqw") else 4
        initial = parse_vector(doc["initial"], "initial", sizes=(dim,))
        norm = float(np.linalg.norm(initial))
        if abs(norm - 1) > tol.prob_tol:
            raise ConfigError("initial", f"norm is {norm:.17g}; initial vectors must have norm 1")

        delta = parse_angle(doc["delta"], "delta") if "delta" in doc else None
        params = parse_params(doc["params"]) if "params" in doc else None
        coin: Any
        if model == "lqw2":
            if "coin" not in doc:
                raise ConfigError("coin", "lqw2 needs a coin")
            coin = parse_matrix(doc["coin"], "coin", size=2)
        elif model == "grover-family":
            if delta is None:
                raise ConfigError("delta", "grover-family needs delta")
            coin = grover_family_matrix(delta)
        else:
            if "pair" in doc:
                pair = parse_pair(doc["pair"], tol=tol)
            elif params is not None:
                pair = pair_from_params(params, tol)
            elif delta is not None:
                pair = grover_family_pair(delta, tol)
            elif model == "lqw4" and "coin" in doc:
                pair = None
            else:
                raise ConfigError("pair", f"{model} needs 'pair', 'params' or 'delta'")
            if model == "dqw":
                coin = pair
            else:
                coin = lift_coin(pair) if pair is not None else parse_matrix(doc["coin"], "coin", size=4)
            if "pair" in doc or params is not None:
                delta = None  # only the Grover family has a limit law
        if model in ("lqw2", "lqw4") and not _unitary(coin, tol):
            raise ConfigError("coin", "coin matrix is not unitary")

        cmp = doc.get("compare", {}) or {}
        if not isinstance(cmp, dict):
            raise ConfigError("compare", "expected an object")
        bw = _positive(cmp.get("bin_width", DEFAULT_BIN_WIDTH), "compare.bin_width")
        eps = cmp.get("epsilon", DEFAULT_EPSILON)
        if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not 0 <= eps < 1:
            raise ConfigError("compare.epsilon", "expected a number in [0, 1)")
        max_l1 = cmp.get("max_l1")
        max_mass = cmp.get("max_mass_error")
        return cls(
            model=model,
            initial=initial,
            steps=steps,
            coin=coin,
            delta=delta,
            params=params,
            bin_width=bw,
            epsilon=float(eps),
            max_l1=None if max_l1 is None else _positive(max_l1, "compare.max_l1"),
            max_mass_error=None if max_mass is None else _positive(max_mass, "compare.max_mass_error"),
            tol=tol,
        )

    def with_steps(self, n: int) -> "ExperimentConfig":
        return replace(self, steps=n)


def _positive(v: Any, field: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
        raise ConfigError(field, f"expected a positive number, got {v!r}")
    return float(v)


def _unitary(m, tol: Tolerance) -> bool:
    from .numerics import is_unitary

    return is_unitary(m, tol)
