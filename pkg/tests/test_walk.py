import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from draws import unit_vector
from dqwalk.decompose import grover_family_matrix, grover_family_pair
from dqwalk.numerics import ValidationError, hadamard, pauli_x
from dqwalk.walk import (
    Distribution,
    WalkState,
    evolve,
    initial_state,
    measure,
    step_dqw,
    step_lqw2,
    step_lqw4,
    trajectory,
)

S = 1 / math.sqrt(2)


def test_initial_state_rejects_non_unit():
    with pytest.raises(ValidationError):
        initial_state([1, 1])
    with pytest.raises(ValidationError):
        initial_state([1, 0, 0])
    st0 = initial_state([S, 1j * S])
    assert st0.offset == 0 and st0.dim == 2


def test_walk_state_is_read_only():
    s = initial_state([1, 0])
    with pytest.raises(ValueError):
        s.amplitudes[0, 0] = 0


def test_shift_directions():
    # component 1 moves left, component 2 moves right
    s = step_lqw2(initial_state([1, 0]), np.eye(2))
    np.testing.assert_allclose(s.at(-1), [1, 0])
    s = step_lqw2(initial_state([0, 1]), np.eye(2))
    np.testing.assert_allclose(s.at(1), [0, 1])
    s = step_lqw4(initial_state([0.5, 0.5, 0.5, 0.5]), np.eye(4))
    np.testing.assert_allclose(s.at(-1), [0.5, 0, 0.5, 0])
    np.testing.assert_allclose(s.at(1), [0, 0.5, 0, 0.5])


def test_hadamard_first_steps():
    # hand-expanded two steps from (1, 0) at the origin
    s = evolve("lqw2", [1, 0], hadamard(), 2)
    np.testing.assert_allclose(s.at(-2), [0.5, 0], atol=1e-15)
    np.testing.assert_allclose(s.at(0), [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(s.at(2), [0, -0.5], atol=1e-15)
    d = measure(s)
    assert d[-2] == pytest.approx(0.25) and d[0] == pytest.approx(0.5) and d[2] == pytest.approx(0.25)
    assert d[1] == 0 and d[17] == 0


def test_coin_x_oscillates():
    d = measure(evolve("lqw2", [S, 1j * S], pauli_x(), 7))
    assert d[-1] == pytest.approx(0.5, abs=1e-15) and d[1] == pytest.approx(0.5, abs=1e-15)


def test_grover_family_two_steps_ballistic():
    d = measure(evolve("lqw4", [1, 0, 0, 0], grover_family_matrix(3 * math.pi / 4), 2))
    assert d[-2] == pytest.approx(0.5, abs=1e-15)
    assert d[0] == pytest.approx(0.5, abs=1e-15)


def test_n_zero_is_identity():
    s = evolve("lqw2", [1, 0], hadamard(), 0)
    d = measure(s)
    assert d.positions.tolist() == [0] and d[0] == 1


def test_trajectory_yields_all_times():
    states = list(trajectory("lqw2", [1, 0], hadamard(), 5))
    assert len(states) == 6
    assert [s.positions.min() for s in states] == [0, -1, -2, -3, -4, -5]


def test_non_unitary_coin_rejected():
    with pytest.raises(ValidationError):
        evolve("lqw2", [1, 0], [[1, 1], [0, 1]], 3)
    with pytest.raises(ValidationError):
        evolve("dqw", [1, 0], (hadamard(), 1j * hadamard()), 3)
    with pytest.raises(ValidationError):
        evolve("lqw4", [1, 0, 0, 0], np.eye(4) * 2, 3)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValidationError):
        step_lqw4(initial_state([1, 0]), np.eye(4))
    with pytest.raises(ValidationError):
        step_lqw2(initial_state([1, 0, 0, 0]), np.eye(2))
    with pytest.raises(ValidationError):
        evolve("qw9", [1, 0], np.eye(2), 1)
    with pytest.raises(ValidationError):
        evolve("lqw2", [1, 0], np.eye(2), -1)


def test_dqw_step_is_not_linear():
    pair = grover_family_pair(0.3)
    a = initial_state([1, 0])
    b = initial_state([0, 1])
    ab = WalkState(0, (a.amplitudes + 1j * b.amplitudes) * S)
    lhs = step_dqw(ab, pair).amplitudes
    rhs = (step_dqw(a, pair).amplitudes + 1j * step_dqw(b, pair).amplitudes) * S
    assert np.max(np.abs(lhs - rhs)) > 1e-3


def test_distribution_helpers():
    d = Distribution(-1, np.array([0.25, 0.5, 0.25]))
    assert d.total() == 1
    assert d.moment(1) == 0
    assert d.moment(2, scale=2) == pytest.approx(0.125)
    assert d[5] == 0
    with pytest.raises(ValidationError):
        Distribution(0, np.array([0.5, -0.1])).validate()


def test_padded_and_allclose():
    s = evolve("lqw2", [1, 0], hadamard(), 3)
    p = s.padded(-10, 10)
    assert p.positions[0] == -10 and p.positions[-1] == 10
    assert p.allclose(s, 1e-15)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(0, 60))
def test_norm_preserved_all_models(seed, n):
    rng = np.random.default_rng(seed)
    for model, coin, dim in (
        ("lqw2", hadamard(), 2),
        ("dqw", grover_family_pair(rng.uniform(-3, 3)), 2),
        ("lqw4", grover_family_matrix(rng.uniform(-3, 3)), 4),
    ):
        s = evolve(model, unit_vector(rng, dim), coin, n)
        assert abs(s.norm_sq() - 1) < 1e-12
        assert abs(measure(s).total() - 1) < 1e-10
