import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_sos
from somor import (
    ExponentialInput, SplitBalancedTruncation, CombinedBalancedTruncation, TabulatedInput,
    TimeGrid, Trajectory, ZeroInput, generate_msd, l2_error_integral, simulate,
    simulate_system, superpose)
from somor.exceptions import GridMismatch, InvalidParameter


def scalar_run(x0, v0, h, t_end=1.0):
    return simulate(1.0, 3.0, 2.0, 1.0, 1.0, [x0], [v0], None, TimeGrid(t_end, h))


def exact_x0(t):
    return 2 * np.exp(-t) - np.exp(-2 * t)


def exact_v0(t):
    return np.exp(-t) - np.exp(-2 * t)


class TestScalarOracles:
    def test_position(self):
        y = scalar_run(1.0, 0.0, 1e-3)
        assert y.final[0] == pytest.approx(0.60042, abs=1e-4)
        assert y.final[0] == pytest.approx(exact_x0(1.0), abs=1e-6)

    def test_velocity(self):
        y = scalar_run(0.0, 1.0, 1e-3)
        assert y.final[0] == pytest.approx(0.23254, abs=1e-4)
        assert y.final[0] == pytest.approx(exact_v0(1.0), abs=1e-6)

    @pytest.mark.parametrize("x0,v0,exact", [(1.0, 0.0, exact_x0), (0.0, 1.0, exact_v0)])
    def test_second_order_convergence(self, x0, v0, exact):
        errs = [np.max(np.abs(scalar_run(x0, v0, h).samples[:, 0] - exact(TimeGrid(1.0, h).times)))
                for h in (1e-2, 5e-3)]
        assert 3.5 <= errs[0] / errs[1] <= 4.5

    def test_forced_exponential(self):
        # x'' + 3x' + 2x = e^{-3t} from rest: x = e^{-t}/2 - e^{-2t} + e^{-3t}/2
        y = simulate(1.0, 3.0, 2.0, 1.0, 1.0, None, None, ExponentialInput(1.0, -3.0),
                     TimeGrid(2.0, 1e-3))
        t = y.times
        exact = 0.5 * np.exp(-t) - np.exp(-2 * t) + 0.5 * np.exp(-3 * t)
        np.testing.assert_allclose(y.samples[:, 0], exact, atol=1e-6)


def test_zero_everything():
    y = simulate(1.0, 3.0, 2.0, 1.0, 1.0, None, None, ZeroInput(), TimeGrid(1.0, 1e-2))
    assert not y.samples.any()


class TestSuperpose:
    def test_zeros_plus_y(self):
        g = TimeGrid(1.0, 0.1)
        y = Trajectory(g, np.arange(11.0))
        z = Trajectory(g, np.zeros(11))
        np.testing.assert_array_equal(superpose(z, y, z).samples, y.samples)

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            superpose(Trajectory(TimeGrid(1.0, 0.1), np.zeros(11)),
                      Trajectory(TimeGrid(1.0, 0.05), np.zeros(21)))

    def test_linearity(self, rng):
        sos = random_sos(rng, 5, m=2, p=2, k0=1, kv=1)
        g, u = TimeGrid(3.0, 1e-3), ExponentialInput([0.2, -0.1], -1.0)
        z0, w0 = np.array([1.0]), np.array([-0.5])
        y = simulate_system(sos, u, g, z0, w0)
        parts = [simulate(sos.M, sos.D, sos.K, sos.B, sos.C, None, None, u, g),
                 simulate(sos.M, sos.D, sos.K, sos.B, sos.C, sos.X0 @ z0, None, None, g),
                 simulate(sos.M, sos.D, sos.K, sos.B, sos.C, None, sos.V0 @ w0, None, g)]
        assert np.max(np.abs(y.samples - superpose(*parts).samples)) <= 1e-10


class TestL2:
    def test_identical(self):
        g = TimeGrid(1.0, 0.01)
        y = Trajectory(g, np.sin(g.times))
        assert not l2_error_integral(y, y).samples.any()

    def test_exponential_difference(self):
        g = TimeGrid(20.0, 1e-3)
        y = Trajectory(g, np.exp(-g.times))
        zero = Trajectory(g, np.zeros_like(g.times))
        final = l2_error_integral(y, zero).final[0]
        assert final == pytest.approx(np.sqrt((1 - np.exp(-40)) / 2), abs=1e-4)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_l2_running_nondecreasing(seed):
    rng = np.random.default_rng(seed)
    g = TimeGrid(1.0, 0.01)
    a = Trajectory(g, rng.standard_normal((101, 2)))
    b = Trajectory(g, rng.standard_normal((101, 2)))
    assert np.all(np.diff(l2_error_integral(a, b).samples[:, 0]) >= 0)


class TestGrid:
    def test_points(self):
        g = TimeGrid(1.0, 0.25)
        np.testing.assert_allclose(g.times, [0, 0.25, 0.5, 0.75, 1.0])

    @pytest.mark.parametrize("t_end,h", [(1.0, 0.0), (0.0, 0.1), (1.0, 0.3)])
    def test_invalid(self, t_end, h):
        with pytest.raises(InvalidParameter):
            TimeGrid(t_end, h)


def test_tabulated_matches_exponential():
    g = TimeGrid(2.0, 1e-3)
    tab = TabulatedInput(g.times, 0.2 * np.exp(-g.times))
    y1 = simulate(1.0, 3.0, 2.0, 1.0, 1.0, None, None, tab, g)
    y2 = simulate(1.0, 3.0, 2.0, 1.0, 1.0, None, None, ExponentialInput(0.2, -1.0), g)
    np.testing.assert_allclose(y1.samples, y2.samples, atol=1e-14)


@pytest.mark.parametrize("est", [SplitBalancedTruncation, CombinedBalancedTruncation])
def test_bound_dominates_small_msd(est):
    sos = generate_msd(40)
    u, g = ExponentialInput(0.2, -1.0), TimeGrid(20.0, 1e-3)
    model = est(tol=1e-3).fit(sos)
    y = simulate_system(sos, u, g, [1.0], [1.0])
    err = l2_error_integral(y, model.predict(u, g, [1.0], [1.0])).final[0]
    bound = model.error_bound(u.hinf, [1.0], [1.0]).total
    assert err <= bound
