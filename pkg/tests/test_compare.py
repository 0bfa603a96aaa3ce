import math

import numpy as np
import pytest

from dqwalk.compare import binned_masses, compare, localization_mass, window_halfwidth
from dqwalk.decompose import grover_family_matrix
from dqwalk.limits import KonnoLimit, grover_limit
from dqwalk.walk import Distribution, evolve, measure


class Uniform:
    """Uniform law on (-1, 1) with an atom of mass ``atom`` at 0."""

    def __init__(self, atom=0.0):
        self.atom = atom
        self.support = 1.0

    def cdf_continuous(self, y):
        y = np.clip(np.asarray(y, dtype=float), -1, 1)
        return (1 - self.atom) * (y + 1) / 2

    def moment(self, r):
        return (1 - self.atom) * (0 if r % 2 else 1 / (r + 1)) + (self.atom if r == 0 else 0)


def test_window_halfwidth():
    assert window_halfwidth(1000, 0.02) == 20
    assert window_halfwidth(1001, 0.02) == 20
    assert window_halfwidth(50, 0.02) == 1
    assert window_halfwidth(10, 0.0) == 0


def test_bins_tile_and_edges_are_exact():
    n = 100
    # one unit of mass at each site x in [-100, 100]
    d = Distribution(-n, np.ones(2 * n + 1))
    lo, hi, emp, pred = binned_masses(d, n, Uniform(), bin_width=0.1, epsilon=0.02)
    assert lo[0] == pytest.approx(-1) and hi[-1] == pytest.approx(1)
    m = len(lo) // 2
    # contiguous on each side, with the window (-eps, eps) left out
    np.testing.assert_allclose(hi[: m - 1], lo[1:m])
    np.testing.assert_allclose(hi[m:-1], lo[m + 1 :])
    assert hi[m - 1] == pytest.approx(-0.02) and lo[m] == pytest.approx(0.02)
    # sites 3..12 fall in (0.02, 0.12], i.e. 10 sites; the window holds |x| <= 2
    assert emp[len(emp) // 2] == 10
    assert emp.sum() == 2 * n + 1 - 5
    assert pred.sum() == pytest.approx(0.98)


def test_localization_mass_averages_two_times():
    a = Distribution(-1, np.array([0.0, 1.0, 0.0]))
    b = Distribution(-1, np.array([0.5, 0.0, 0.5]))
    assert localization_mass(a, b, 1, epsilon=0.4) == pytest.approx(0.5)  # both windows are {0}
    assert localization_mass(a, b, 100, epsilon=0.02) == pytest.approx(1.0)


def test_compare_against_konno():
    phi = [1 / math.sqrt(2), 1j / math.sqrt(2)]
    from dqwalk.numerics import hadamard

    states = [evolve("lqw2", phi, hadamard(), n) for n in (500, 501)]
    rep = compare(measure(states[0]), measure(states[1]), 500, KonnoLimit(1 / math.sqrt(2), 0.0))
    assert rep.l1 < 0.05 and rep.sup >= 0 and rep.mass_error < 0.05
    assert rep.moments[1][1] == pytest.approx(rep.moments[1][2], abs=5e-3)
    assert rep.passed(0.05, 0.05) and not rep.passed(1e-9)
    assert set(rep.as_dict()) >= {"l1", "sup", "localization_mass", "predicted_A", "moments"}


def test_l1_decreases_with_n():
    delta, phi = math.pi / 2, [0.5, -0.5, 0.5, -0.5]
    gl = grover_limit(delta, phi)
    coin = grover_family_matrix(delta)
    l1 = []
    for n in (250, 500, 1000):
        d0 = measure(evolve("lqw4", phi, coin, n))
        d1 = measure(evolve("lqw4", phi, coin, n + 1))
        l1.append(compare(d0, d1, n, gl).l1)
    assert l1[0] > l1[1] > l1[2]


def test_compare_argument_checks():
    d = Distribution(0, np.array([1.0]))
    with pytest.raises(ValueError):
        compare(d, d, 0, Uniform())
    with pytest.raises(ValueError):
        compare(d, d, 10, Uniform(), bin_width=0)
