import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from vacuum_kinetics.core import DomainError, UnitSystem
from vacuum_kinetics.master_equation import (
    PhotonDistribution,
    TruncationError,
    cavity_temperature,
    cavity_temperature_printed_form,
    drift,
    evolve,
    steady_state,
)


class TestDrift:
    def test_vacuum_with_emission(self):
        p0 = PhotonDistribution.vacuum(8)
        dp = drift(p0, (0.0, 0.3))  # R1 = 0, R2 = 0.3
        assert_allclose(dp[0], -0.3)
        assert_allclose(dp[1], +0.3)
        assert np.all(dp[2:] == 0.0)

    def test_zero_rates(self):
        p0 = PhotonDistribution.number_state(3, 8)
        assert np.all(drift(p0, (0.0, 0.0)) == 0.0)

    def test_geometric_is_stationary(self):
        q = 0.5
        n = np.arange(201)
        p = PhotonDistribution((1 - q) * q**n, 200)
        dp = drift(p, (1.0, 0.5))
        assert np.max(np.abs(dp)) < 1e-12

    def test_trace_conserving_generator(self):
        rng = np.random.default_rng(3)
        raw = rng.random(17)
        p = PhotonDistribution(raw / raw.sum(), 16)
        assert abs(drift(p, (0.7, 0.4)).sum()) < 1e-15


class TestEvolve:
    def test_pure_absorption_empties_cavity(self):
        p0 = PhotonDistribution.number_state(3, 32)
        out = evolve(p0, (1.0, 0.0), t_final=20.0)
        want = np.zeros(33)
        want[0] = 1.0
        assert np.max(np.abs(out.p - want)) < 1e-8

    def test_mean_occupation_relaxes_to_thermal(self):
        out = evolve(PhotonDistribution.vacuum(60), (1.0, 0.5), t_final=40.0)
        assert_allclose(out.mean_occupation, 1.0, rtol=1e-6)

    def test_trace_preserved_along_the_way(self):
        p = PhotonDistribution.vacuum(40)
        for _ in range(5):
            p = evolve(p, (1.0, 0.5), t_final=2.0)
            assert abs(p.trace - 1.0) <= 1e-12

    def test_truncation_violation_raises(self):
        with pytest.raises(TruncationError):
            evolve(PhotonDistribution.vacuum(4), (1.0, 0.9), t_final=200.0)

    def test_convergence_from_random_initial_states(self):
        r1, r2 = 1.0, 0.4
        target = steady_state((r1, r2), N_max=64)
        rng = np.random.default_rng(11)
        for _ in range(5):
            raw = rng.random(target.N_max + 1)
            p0 = PhotonDistribution(raw / raw.sum(), target.N_max)
            out = evolve(p0, (r1, r2), t_final=50.0 / (r1 - r2))
            assert np.abs(out.p - target.p).sum() <= 1e-6


class TestSteadyState:
    def test_zero_ratio_is_vacuum(self):
        ss = steady_state((1.0, 0.0), N_max=16)
        assert ss.p[0] == 1.0 and np.all(ss.p[1:] == 0.0)

    def test_half_ratio_values(self):
        ss = steady_state((1.0, 0.5))
        assert_allclose(ss.p[:3], [0.5, 0.25, 0.125], rtol=1e-12)

    def test_drift_vanishes_on_steady_state(self):
        ss = steady_state((2.0, 1.2))
        assert np.max(np.abs(drift(ss, (2.0, 1.2)))) < 1e-12

    def test_detailed_balance_level_by_level(self):
        r1, r2 = 1.0, 0.63
        ss = steady_state((r1, r2))
        n = np.arange(1, ss.N_max + 1)
        lhs = r1 * n * ss.p[1:]
        rhs = r2 * n * ss.p[:-1]
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_auto_doubling_for_heavy_tail(self):
        ss = steady_state((1.0, 0.9), N_max=16)
        assert ss.N_max > 16
        assert ss.p[-1] < 1e-10

    def test_no_steady_state_when_emission_wins(self):
        with pytest.raises(DomainError):
            steady_state((0.5, 0.5))
        with pytest.raises(DomainError):
            steady_state((0.5, 0.9))

    def test_truncation_robustness(self):
        a = steady_state((1.0, 0.5), N_max=64)
        b = steady_state((1.0, 0.5), N_max=128)
        k = 32
        assert np.max(np.abs(a.p[:k] - b.p[:k])) < 1e-12


class TestCavityTemperature:
    def test_unit_log_ratio(self):
        assert_allclose(cavity_temperature((math.e, 1.0), nu=1.0), 1.0, rtol=1e-12)

    def test_adiabatic_ratio_gives_unruh_temperature(self):
        # R2/R1 = exp(-2 pi nu / alpha) at omega = nu maps to T_c = alpha/(2 pi)
        alpha, nu = 1.3, 0.7
        r2_over_r1 = math.exp(-2 * math.pi * nu / alpha)
        t_c = cavity_temperature((1.0, r2_over_r1), nu=nu)
        assert_allclose(t_c, alpha / (2 * math.pi), rtol=1e-12)

    def test_monotone_in_ratio(self):
        temps = [cavity_temperature((1.0, q), nu=1.0) for q in (0.2, 0.4, 0.6, 0.8)]
        assert all(b > a for a, b in zip(temps, temps[1:]))

    def test_boltzmann_consistency(self):
        r1, r2, nu = 1.0, 0.37, 2.0
        units = UnitSystem(c=1.0, hbar=1.7, kB=0.4)
        t_c = cavity_temperature((r1, r2), nu, units)
        assert_allclose(r2 / r1, math.exp(-units.hbar * nu / (units.kB * t_c)), rtol=1e-12)

    def test_edge_cases(self):
        assert cavity_temperature((1.0, 0.0), nu=1.0) == 0.0
        with pytest.raises(DomainError):
            cavity_temperature((1.0, 1.0), nu=1.0)
        with pytest.raises(DomainError):
            cavity_temperature((1.0, 0.5), nu=0.0)

    def test_printed_form_recorded_but_different(self):
        r = (1.0, 0.5)
        consistent = cavity_temperature(r, nu=1.0)
        printed = cavity_temperature_printed_form(r, nu=1.0)
        assert printed != pytest.approx(consistent)
        assert_allclose(printed, math.log(2.0), rtol=1e-12)


class TestPhotonDistribution:
    def test_invariants(self):
        with pytest.raises(DomainError):
            PhotonDistribution(np.array([0.5, 0.6]), 1)  # not normalized
        with pytest.raises(DomainError):
            PhotonDistribution(np.array([1.1, -0.1]), 1)  # negative entry
        with pytest.raises(DomainError):
            PhotonDistribution(np.array([1.0]), 1)  # wrong length

    def test_mean(self):
        p = PhotonDistribution(np.array([0.25, 0.5, 0.25]), 2)
        assert_allclose(p.mean_occupation, 1.0)
