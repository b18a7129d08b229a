import cmath
import math

import pytest
from numpy.testing import assert_allclose

from vacuum_kinetics.core import DomainError
from vacuum_kinetics.cavity_scheme import (
    CavitySpec,
    OnResonanceError,
    OutOfRegimeWarning,
    SuddenEmission,
    TransitionRates,
    amplitude_adiabatic_contour_oracle,
    amplitude_I1,
    amplitude_I2,
    emission_rate_sudden,
    rates,
    ratio_adiabatic,
    ratio_constant_velocity,
    ratio_sudden_asymptotic,
)


def spec_for(nu, omega, alpha, T, lam=1.0, r=1.0):
    return CavitySpec(nu=nu, omega=omega, alpha=alpha, lambda_coupling=lam,
                      T_transit=T, injection_rate=r)


class TestAmplitudes:
    @pytest.mark.parametrize("nu,omega,alpha,T", [
        (1.0, 1.0, 1.0, 2.0),
        (3.0, 0.7, 1.0, 4.0),
        (2.0, 1.0, 0.5, 3.0),
    ])
    def test_decomposition_identity(self, nu, omega, alpha, T):
        spec = spec_for(nu, omega, alpha, T)
        full = amplitude_I1(spec, "full_sudden")
        window = amplitude_I1(spec, "window_only")
        assert abs(full - window) <= 1e-8 * max(abs(full), 1.0)

    def test_window_equals_adiabatic_difference(self):
        spec_T = spec_for(2.0, 1.0, 1.0, 3.0)
        spec_0 = spec_for(2.0, 1.0, 1.0, 1e-14)
        ad_T = amplitude_I1(spec_T, "adiabatic_past_only")
        ad_0 = amplitude_I1(spec_0, "adiabatic_past_only")
        full = amplitude_I1(spec_T, "full_sudden")
        assert abs((ad_T - ad_0) - full) <= 1e-7 * max(abs(full), 1.0)

    @pytest.mark.parametrize("woa", [0.5, 1.0, 2.0])
    def test_adiabatic_boltzmann_ratio(self, woa):
        # T -> inf adiabatic amplitudes at + and - omega
        spec = spec_for(nu=1.0, omega=woa, alpha=1.0, T=math.inf)
        i_abs = amplitude_I1(spec, "adiabatic_past_only")
        i_em = amplitude_I2(spec, "adiabatic_past_only")
        ratio = abs(i_em) ** 2 / abs(i_abs) ** 2
        assert_allclose(ratio, math.exp(-2 * math.pi * woa), rtol=1e-4)

    def test_adiabatic_matches_gamma_closed_form(self):
        # (1/alpha) Gamma(1 - ib) (-i nu/alpha)^{ib - 1} for T -> inf
        from scipy.special import gamma
        b, p = 1.0, 1.0
        spec = spec_for(nu=p, omega=b, alpha=1.0, T=math.inf)
        got = amplitude_I1(spec, "adiabatic_past_only")
        want = gamma(1 - 1j * b) * (-1j * p) ** (1j * b - 1)
        assert_allclose(got, want, rtol=1e-8)

    @pytest.mark.parametrize("woa,T", [(1.0, math.inf), (0.5, 3.0)])
    def test_contour_oracle_agreement(self, woa, T):
        spec = spec_for(nu=1.3, omega=woa, alpha=1.0, T=T)
        regulated = amplitude_I1(spec, "adiabatic_past_only")
        oracle = amplitude_adiabatic_contour_oracle(spec)
        assert abs(regulated - oracle) <= 1e-8 * max(abs(oracle), 1.0)

    def test_alpha_zero_routes_to_inertial_window(self):
        spec = spec_for(nu=2.0, omega=1.0, alpha=0.0, T=1.0)
        got = amplitude_I1(spec, "full_sudden")
        want = (cmath.exp(1j * (1.0 - 2.0) * 1.0) - 1.0) / (1j * (1.0 - 2.0))
        assert_allclose(got, want, rtol=1e-12)
        with pytest.raises(DomainError):
            amplitude_I1(spec, "adiabatic_past_only")

    def test_counter_propagation_rejected_when_accelerated(self):
        spec = CavitySpec(nu=1.0, omega=1.0, alpha=1.0, lambda_coupling=1.0,
                          T_transit=1.0, injection_rate=1.0, propagation="counter")
        with pytest.raises(DomainError):
            amplitude_I1(spec)

    def test_unknown_mode_rejected(self):
        with pytest.raises(DomainError):
            amplitude_I1(spec_for(1.0, 1.0, 1.0, 1.0), "sideways")


class TestRates:
    def test_zero_coupling(self):
        res = rates(spec_for(2.0, 1.0, 1.0, 2.0, lam=0.0))
        assert res.R1 == 0.0 and res.R2 == 0.0

    def test_scaling_linear_in_rate_quadratic_in_coupling(self):
        base = rates(spec_for(2.0, 1.0, 1.0, 2.0, lam=1.0, r=1.0))
        scaled = rates(spec_for(2.0, 1.0, 1.0, 2.0, lam=3.0, r=2.0))
        assert_allclose(scaled.R1, 2.0 * 9.0 * base.R1, rtol=1e-12)
        assert_allclose(scaled.R2, 2.0 * 9.0 * base.R2, rtol=1e-12)

    def test_sudden_regime_ratio(self):
        omega, alpha = 100.0, 1.0
        nu = 100.0 * omega
        T = 2.0 * math.log(nu / omega) / alpha
        res = rates(spec_for(nu, omega, alpha, T))
        asym = alpha / (2 * math.pi * omega)
        assert abs(res.R2 / res.R1 - asym) <= 0.15 * asym

    def test_sudden_ratio_monotone_approach(self):
        # at fixed omega/alpha = 100 the deviation from alpha/(2 pi omega)
        # shrinks as nu/omega grows through 30, 100, 300
        omega, alpha = 100.0, 1.0
        asym = alpha / (2 * math.pi * omega)
        devs = []
        for nu_over_omega in (30.0, 100.0, 300.0):
            nu = nu_over_omega * omega
            T = 2.0 * math.log(nu / omega) / alpha
            res = rates(spec_for(nu, omega, alpha, T))
            devs.append(abs(res.R2 / res.R1 - asym))
        assert devs[0] > devs[1] > devs[2]

    def test_regime_flag(self):
        flagged = rates(spec_for(2.0, 1.0, 1.0, 1.0))  # e^{-alpha T} = 0.37, nu < 10 alpha
        assert "out_of_regime" in flagged.flags
        clean = rates(spec_for(1e4, 100.0, 1.0, 9.3))
        assert "out_of_regime" not in clean.flags

    def test_invariants(self):
        with pytest.raises(DomainError):
            TransitionRates(R1=-1.0, R2=0.0, I1=0j, I2=0j)


class TestRegimeFormulas:
    def test_ratio_adiabatic_values(self):
        assert_allclose(ratio_adiabatic(1.0, 1.0), 1.8674e-3, rtol=1e-4)
        assert_allclose(ratio_adiabatic(2.0, 1.0), 3.4873e-6, rtol=1e-4)
        assert_allclose(ratio_adiabatic(0.0, 1.0), 1.0)

    def test_ratio_sudden_value_and_monotonicity(self):
        assert_allclose(ratio_sudden_asymptotic(100.0, 1.0), 1.0 / (200 * math.pi), rtol=1e-12)
        assert ratio_sudden_asymptotic(200.0, 1.0) < ratio_sudden_asymptotic(100.0, 1.0)

    def test_ratio_sudden_warns_out_of_regime(self):
        with pytest.warns(OutOfRegimeWarning):
            ratio_sudden_asymptotic(5.0, 1.0)

    def test_emission_rate_sudden(self):
        omega, alpha = 100.0, 1.0
        nu = 100.0 * omega
        T = 2.0 * math.log(nu / omega) / alpha
        res = emission_rate_sudden(spec_for(nu, omega, alpha, T, lam=2.0))
        assert isinstance(res, SuddenEmission)
        assert abs(res.ratio - 1.0) <= 0.10
        # exact quadratic coupling scaling
        res1 = emission_rate_sudden(spec_for(nu, omega, alpha, T, lam=1.0))
        assert_allclose(res.numerical, 4.0 * res1.numerical, rtol=1e-12)

    def test_emission_rate_acceleration_independent(self):
        omega = 100.0
        nu = 100.0 * omega
        vals = []
        for alpha in (1.0, 2.0):
            T = 2.0 * math.log(nu / omega) / alpha
            vals.append(emission_rate_sudden(spec_for(nu, omega, alpha, T)).numerical)
        assert abs(vals[1] / vals[0] - 1.0) < 0.05


class TestConstantVelocity:
    def test_zero_numerator(self):
        # nu = 3 omega, T = pi/(2 omega): (nu+omega)T = 2 pi kills the numerator
        omega = 1.0
        ratio = ratio_constant_velocity(3.0 * omega, omega, 0.0, math.pi / (2 * omega))
        assert ratio < 1e-10

    def test_short_transit_limit(self):
        # T -> 0: both windows scale as T^2 (nu' +- omega)^2, cancelling the prefactor
        nu, omega = 3.0, 1.0
        T = 1e-3 / (nu + omega)
        assert_allclose(ratio_constant_velocity(nu, omega, 0.0, T), 1.0, atol=1e-3)

    def test_doppler_substitution_identity(self):
        # moving atom at v = 0.6c sees nu' = nu/2; identical to a static atom
        # against a cavity mode at half the frequency
        nu, omega, T = 4.0, 1.3, 0.9
        moving = ratio_constant_velocity(nu, omega, 0.6, T)
        static = ratio_constant_velocity(nu / 2.0, omega, 0.0, T)
        assert_allclose(moving, static, rtol=1e-12)

    def test_velocity_flip_equals_propagation_flip(self):
        nu, omega, T, v = 2.5, 1.0, 1.7, 0.4
        a = ratio_constant_velocity(nu, omega, v, T, propagation="co")
        b = ratio_constant_velocity(nu, omega, -v, T, propagation="counter")
        assert_allclose(a, b, rtol=1e-12)

    def test_on_resonance_raises(self):
        # (nu' - omega) T = 2 pi exactly
        omega = 1.0
        nu = omega + 2 * math.pi
        with pytest.raises(OnResonanceError):
            ratio_constant_velocity(nu, omega, 0.0, 1.0)

    def test_rejects_superluminal(self):
        with pytest.raises(DomainError):
            ratio_constant_velocity(1.0, 1.0, 1.2, 1.0)


def test_spec_validation():
    with pytest.raises(DomainError):
        CavitySpec(nu=0.0, omega=1.0, alpha=1.0, lambda_coupling=1.0,
                   T_transit=1.0, injection_rate=1.0)
    with pytest.raises(DomainError):
        CavitySpec(nu=1.0, omega=1.0, alpha=-1.0, lambda_coupling=1.0,
                   T_transit=1.0, injection_rate=1.0)
    with pytest.raises(DomainError):
        CavitySpec(nu=1.0, omega=1.0, alpha=1.0, lambda_coupling=1.0,
                   T_transit=0.0, injection_rate=1.0)
    with pytest.raises(DomainError):
        CavitySpec(nu=1.0, omega=1.0, alpha=1.0, lambda_coupling=1.0,
                   T_transit=1.0, injection_rate=1.0, propagation="up")
