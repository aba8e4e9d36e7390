"""Core types, grids, quadrature and interpolation."""

import numpy as np
import pytest

from stiraplink.core import (
    AtomState,
    PhotonEnvelope,
    PhysicalParams,
    TimeGrid,
    cumulative_simpson_uniform,
    default_grid,
    interpolate,
    simpson_uniform,
)
from stiraplink.pulse_shaping import design_emission_schedule, gaussian_target


def gaussian_amplitude(params, t):
    amp = (2.0 / (np.pi * params.gamma**2 * params.sigma**2)) ** 0.25
    return amp * np.exp(-((params.t_max - t) ** 2) / params.sigma**2)


class TestPhysicalParams:
    def test_reference_values(self):
        p = PhysicalParams.reference()
        assert p.sigma * p.gamma == 10.0
        assert p.gamma * (p.t_max - p.t0) == 25.0
        assert p.delta1 == p.delta2 == 0.0
        assert p.t_end == p.t_max + (p.t_max - p.t0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"gamma": 0.0},
            {"gamma": -1.0},
            {"omega": -0.5},
            {"sigma": 0.0},
            {"t0": 30.0},           # t0 > t_max
            {"t_end": 20.0},        # t_end < t_max
        ],
    )
    def test_invalid_rejected(self, kwargs):
        base = dict(gamma=1.0, omega=10.0, sigma=10.0, t0=0.0, t_max=25.0, t_end=50.0)
        base.update(kwargs)
        with pytest.raises(ValueError):
            PhysicalParams(**base)

    def test_rescaled_design_is_identical(self):
        # Natural units: scaling all dimensional inputs by kappa leaves the
        # dimensionless schedule unchanged.
        kappa = 7.0
        p1 = PhysicalParams.reference()
        p2 = PhysicalParams(
            gamma=kappa,
            omega=10.0 * kappa,
            sigma=10.0 / kappa,
            t0=0.0,
            t_max=25.0 / kappa,
            t_end=50.0 / kappa,
        )
        s1 = design_emission_schedule(p1)
        s2 = design_emission_schedule(p2)
        assert np.max(np.abs(s1.theta - s2.theta)) < 1e-8


class TestTimeGrid:
    def test_uniform(self):
        g = TimeGrid.uniform(0.0, 1.0, 11)
        assert g.spacing == pytest.approx(0.1)
        assert g.samples[0] == 0.0 and g.samples[-1] == 1.0

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            TimeGrid.uniform(0.0, 1.0, 1)

    def test_non_uniform_rejected(self):
        samples = np.array([0.0, 0.1, 0.25, 0.3])
        with pytest.raises(ValueError):
            TimeGrid(start=0.0, end=0.3, n_points=4, samples=samples)

    def test_decreasing_rejected(self):
        samples = np.array([0.0, 0.2, 0.1])
        with pytest.raises(ValueError):
            TimeGrid(start=0.0, end=0.1, n_points=3, samples=samples)

    def test_shifted(self):
        g = TimeGrid.uniform(0.0, 2.0, 5).shifted(3.0)
        assert g.start == 3.0 and g.end == 5.0
        assert np.allclose(g.samples, [3.0, 3.5, 4.0, 4.5, 5.0])

    def test_samples_read_only(self):
        g = TimeGrid.uniform(0.0, 1.0, 5)
        with pytest.raises(ValueError):
            g.samples[0] = 99.0


class TestAtomState:
    def test_vector_round_trip(self):
        s = AtomState(0.5 + 0.1j, 0.2j, 0.1, 0.3 - 0.2j)
        assert AtomState.from_vector(s.as_vector()) == s

    def test_norm_guard(self):
        with pytest.raises(ValueError):
            AtomState(1.0, 1.0, 0.0, 0.0)

    def test_constructors(self):
        assert AtomState.ground1().norm_sq == 1.0
        assert AtomState.excited().c_r == 1.0
        assert AtomState.empty().norm_sq == 0.0


class TestPhotonEnvelope:
    def test_shape_mismatch(self):
        g = TimeGrid.uniform(0.0, 1.0, 5)
        with pytest.raises(ValueError):
            PhotonEnvelope(grid=g, values=np.zeros(4, complex))

    def test_emission_probability_of_unit_target(self):
        params = PhysicalParams.reference()
        env = gaussian_target(params, default_grid(params))
        assert env.emission_probability(params.gamma) == pytest.approx(1.0, abs=1e-6)


class TestInterpolate:
    def test_exact_at_nodes(self):
        params = PhysicalParams.reference()
        g = TimeGrid.uniform(10.0, 40.0, 500)
        env = gaussian_target(params, g)
        assert np.array_equal(interpolate(env, g.samples), env.values)
        # scalar query on the last node, where plain polynomial evaluation
        # would round
        assert interpolate(env, float(g.samples[-1])) == env.values[-1]

    def test_constant_samples(self):
        g = TimeGrid.uniform(0.0, 1.0, 50)
        env = PhotonEnvelope(grid=g, values=np.full(50, 0.25 + 0.0j))
        assert interpolate(env, 0.637) == 0.25 + 0.0j

    def test_gaussian_midpoints_match_direct_evaluation(self):
        # Oracle: direct evaluation of the closed-form Gaussian amplitude.
        params = PhysicalParams.reference()
        g = TimeGrid.uniform(10.0, 40.0, 2000)
        env = gaussian_target(params, g)
        mids = 0.5 * (g.samples[:-1] + g.samples[1:])
        exact = gaussian_amplitude(params, mids)
        got = np.real(interpolate(env, mids))
        assert np.max(np.abs(got - exact) / exact) <= 1e-6

    def test_out_of_range_raises(self):
        params = PhysicalParams.reference()
        g = TimeGrid.uniform(0.0, 50.0, 100)
        env = gaussian_target(params, g)
        with pytest.raises(ValueError):
            interpolate(env, 50.5)
        with pytest.raises(ValueError):
            interpolate(env, np.array([10.0, -0.5]))

    def test_schedule_interpolation(self):
        params = PhysicalParams.reference()
        sched = design_emission_schedule(params)
        assert interpolate(sched, sched.grid.samples[17]) == sched.theta[17]
        mid = 0.5 * (sched.grid.samples[100] + sched.grid.samples[101])
        val = interpolate(sched, mid)
        lo, hi = sorted((sched.theta[100], sched.theta[101]))
        assert lo <= val <= hi  # monotone-safe: no overshoot


class TestQuadrature:
    def test_simpson_vs_analytic(self):
        t = np.linspace(0.0, 1.0, 101)
        got = simpson_uniform(np.exp(-t), t[1] - t[0])
        assert got == pytest.approx(1.0 - np.exp(-1.0), abs=1e-9)

    def test_simpson_even_point_count(self):
        t = np.linspace(0.0, 1.0, 100)
        got = simpson_uniform(np.exp(-t), t[1] - t[0])
        assert got == pytest.approx(1.0 - np.exp(-1.0), abs=1e-8)

    @pytest.mark.parametrize("n", [3, 4, 101, 100])
    def test_cumulative_forward(self, n):
        # Local truncation of the half-parabola rule is f''' h^4 / 24.
        t = np.linspace(0.0, 1.0, n)
        h = t[1] - t[0]
        got = cumulative_simpson_uniform(np.exp(-t), h)
        assert np.max(np.abs(got - (1.0 - np.exp(-t)))) < h**3 / 30.0

    @pytest.mark.parametrize("n", [3, 4, 101, 100])
    def test_cumulative_backward(self, n):
        t = np.linspace(0.0, 1.0, n)
        h = t[1] - t[0]
        got = cumulative_simpson_uniform(np.exp(-t), h, "backward")
        assert np.max(np.abs(got - (np.exp(-t) - np.exp(-1.0)))) < h**3 / 30.0

    def test_cumulative_endpoints(self):
        y = np.random.default_rng(3).uniform(0.1, 1.0, 41)
        fwd = cumulative_simpson_uniform(y, 0.1)
        assert fwd[0] == 0.0
        assert fwd[-1] == pytest.approx(simpson_uniform(y, 0.1), rel=1e-12)
