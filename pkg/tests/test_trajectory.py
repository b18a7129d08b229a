import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from vacuum_kinetics.core import DomainError, UnitSystem
from vacuum_kinetics.quadrature import derivative_n
from vacuum_kinetics.trajectory import (
    AcceleratedTrajectory,
    InertialTrajectory,
    doppler_frequency,
    four_velocity,
    lightcone,
    position,
    proper_time_of_coordinate_time,
    redshifted_mode_phase,
    smear,
)


class TestPosition:
    def test_origin(self):
        t, x = position(AcceleratedTrajectory(alpha=1.0), 0.0)
        assert (t, x) == (0.0, 1.0)

    @pytest.mark.parametrize("tau", [-2.0, -1.0, 0.0, 1.0, 2.0])
    def test_hyperbolic_invariant(self, tau):
        traj = AcceleratedTrajectory(alpha=1.0)
        t, x = position(traj, tau)
        assert_allclose(x**2 - t**2, 1.0, rtol=1e-12)

    @pytest.mark.parametrize("tau", [-1.3, 0.2, 2.4])
    def test_lorentz_shift_property(self, tau):
        # position(tau + s) is the boost with rapidity alpha*s of position(tau)
        alpha, s = 0.7, 0.9
        traj = AcceleratedTrajectory(alpha=alpha)
        t1, x1 = position(traj, tau)
        t2, x2 = position(traj, tau + s)
        ch, sh = math.cosh(alpha * s), math.sinh(alpha * s)
        assert_allclose(t2, ch * t1 + sh * x1, rtol=1e-12, atol=1e-12)
        assert_allclose(x2, sh * t1 + ch * x1, rtol=1e-12, atol=1e-12)

    def test_invariant_with_units(self):
        units = UnitSystem(c=2.5)
        traj = AcceleratedTrajectory(alpha=0.4)
        t, x = position(traj, 1.7, units)
        assert_allclose(x**2 - (units.c * t) ** 2, (units.c / traj.alpha) ** 2, rtol=1e-12)

    def test_inertial(self):
        traj = InertialTrajectory(v=0.6, x0=1.0)
        t, x = position(traj, 2.0)
        gamma = 1.25
        assert_allclose(t, gamma * 2.0)
        assert_allclose(x, 1.0 + 0.6 * gamma * 2.0)
        with pytest.raises(DomainError):
            position(InertialTrajectory(v=1.5), 1.0)

    def test_coordinate_time_inverse(self):
        traj = AcceleratedTrajectory(alpha=2.0)
        for tau in (-1.0, 0.3, 2.0):
            t, _ = position(traj, tau)
            assert_allclose(proper_time_of_coordinate_time(traj, t), tau, rtol=1e-12)


@pytest.mark.parametrize("tau", np.linspace(-3.0, 3.0, 7))
def test_proper_acceleration_magnitude(tau):
    """Finite differences of the 4-velocity give |a| = alpha*c."""
    alpha = 1.3
    traj = AcceleratedTrajectory(alpha=alpha)
    at = derivative_n(lambda s: four_velocity(traj, s)[0], tau, 1, h=0.02)
    ax = derivative_n(lambda s: four_velocity(traj, s)[1], tau, 1, h=0.02)
    assert_allclose(math.sqrt(ax**2 - at**2), alpha, rtol=1e-6)


def test_lightcone_accelerated():
    traj = AcceleratedTrajectory(alpha=0.5)
    for tau in (-1.0, 0.0, 2.0):
        u, v, ud, vd = lightcone(traj, tau)
        t, x = position(traj, tau)
        assert_allclose(u, t - x, rtol=1e-12, atol=1e-15)
        assert_allclose(v, t + x, rtol=1e-12, atol=1e-15)
        assert ud > 0 and vd > 0
        assert_allclose(ud * vd, 1.0, rtol=1e-12)  # normalization of the 4-velocity


class TestSmear:
    def test_zero_distance_identity(self):
        traj = AcceleratedTrajectory(alpha=1.0)
        assert smear(traj, 0.0) == traj

    def test_unit_distance_doubles_coordinates(self):
        traj = AcceleratedTrajectory(alpha=1.0)
        sm = smear(traj, 1.0)
        assert_allclose(sm.alpha, 0.5)
        for tau in (0.0, 0.7, -1.2):
            t0, x0 = position(traj, tau)
            t1, x1 = position(sm, 2.0 * tau)  # its proper time runs 2x faster
            assert_allclose((t1, x1), (2 * t0, 2 * x0), rtol=1e-12)

    def test_scaled_invariant(self):
        traj = AcceleratedTrajectory(alpha=1.0)
        sm = smear(traj, 0.3)
        t, x = position(sm, 1.1)
        assert_allclose(x**2 - t**2, (1.0 + 0.3) ** 2, rtol=1e-12)

    def test_horizon_rejected(self):
        with pytest.raises(DomainError):
            smear(AcceleratedTrajectory(alpha=1.0), -1.0)


class TestDoppler:
    def test_rest(self):
        assert doppler_frequency(2.0, 0.0) == 2.0

    def test_copropagating(self):
        assert_allclose(doppler_frequency(1.0, 0.6, copropagating=True), 0.5, rtol=1e-12)

    def test_antipropagating(self):
        assert_allclose(doppler_frequency(1.0, 0.6, copropagating=False), 2.0, rtol=1e-12)

    @pytest.mark.parametrize("v", [-0.9, -0.3, 0.0, 0.42, 0.99])
    def test_reciprocal_product(self, v):
        nu = 1.7
        co = doppler_frequency(nu, v, True)
        anti = doppler_frequency(nu, v, False)
        assert_allclose(co * anti, nu**2, rtol=1e-12)

    def test_superluminal_rejected(self):
        with pytest.raises(DomainError):
            doppler_frequency(1.0, 1.0)


class TestRedshiftedPhase:
    def test_at_origin(self):
        traj = AcceleratedTrajectory(alpha=2.0)
        assert_allclose(redshifted_mode_phase(traj, 3.0, 0.0), 1.5)

    def test_half_after_log2(self):
        traj = AcceleratedTrajectory(alpha=1.0)
        assert_allclose(redshifted_mode_phase(traj, 1.0, math.log(2.0)), 0.5, rtol=1e-12)

    @pytest.mark.parametrize("tau", [0.0, 1.0, 2.0])
    def test_matches_mode_phase_on_worldline(self, tau):
        traj = AcceleratedTrajectory(alpha=1.0)
        nu = 1.0
        t, x = position(traj, tau)
        assert_allclose(-nu * t + nu * x, redshifted_mode_phase(traj, nu, tau), rtol=1e-12)
