"""Acceptance suite: the closed-form limits and property checks that gate a
release, each with its stated tolerance and runtime budget.

Every criterion is a standalone function returning a :class:`CriterionResult`;
:func:`run_all` executes them in order and prints one PASS/FAIL line per
criterion.  The same entry points back `vacuum-kinetics acceptance` and
tests/test_acceptance.py.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import AtomSpec, unruh_temperature
from .quadrature import derivative_n
from . import casimir_polder as cp
from . import cavity_scheme as cavity
from . import detector_kernels as dk
from . import master_equation as me
from .trajectory import AcceleratedTrajectory, InertialTrajectory

ATOM = AtomSpec(omega0=1.0, alpha0=1.0)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: str
    elapsed: float
    budget: float

    @property
    def in_budget(self) -> bool:
        return self.elapsed < self.budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"ACCEPTANCE {self.number:2d} [{status}] {self.name}: "
                f"{self.details} ({self.elapsed:.2f}s / budget {self.budget:.0f}s)")


def _result(number, name, budget, started, passed, details) -> CriterionResult:
    return CriterionResult(number, name, passed, details,
                           time.perf_counter() - started, budget)


def criterion_1() -> CriterionResult:
    """Near limit: U(R)/(-alpha0 hbar omega0/8R^3) within 1% at R = 1e-3 c/omega0."""
    t0 = time.perf_counter()
    R = 1e-3
    ratio = cp.stationary_potential(ATOM, R) / cp.asymptote_near(ATOM, R)
    ok = 0.99 <= ratio <= 1.01
    return _result(1, "Casimir-Polder near limit", 5.0, t0, ok, f"ratio={ratio:.6f}")


def criterion_2() -> CriterionResult:
    """Far limit: U(R)/(-3 alpha0 hbar c/8 pi R^4) within 1% at R = 1e3 c/omega0."""
    t0 = time.perf_counter()
    R = 1e3
    ratio = cp.stationary_potential(ATOM, R) / cp.asymptote_far(ATOM, R)
    ok = 0.99 <= ratio <= 1.01
    return _result(2, "Casimir-Polder far limit", 5.0, t0, ok, f"ratio={ratio:.6f}")


def criterion_3() -> CriterionResult:
    """Transient force within 1% of stationary for t >= 20 round trips at R = c/omega0."""
    t0 = time.perf_counter()
    R = 1.0
    steady = cp.stationary_force(ATOM, R).force_z
    devs = []
    for factor in (20.0, 28.0):
        scen = cp.WallScenario(R=R, t_elapsed=factor * 2.0 * R)
        res = cp.transient_force(ATOM, scen)
        devs.append(abs(res.force_z - steady) / abs(steady))
    ok = all(d <= 0.01 for d in devs)
    return _result(3, "transient relaxation", 60.0, t0, ok,
                   f"max deviation={max(devs):.2e} (tol 1e-2)")


def criterion_4() -> CriterionResult:
    """Moving atom: zero residual at release, pull-back directions, gradient
    consistency at three distances."""
    t0 = time.perf_counter()
    R0 = 1.0
    at_release = cp.moving_force(ATOM, R0, R0)
    rel_residual = abs(at_release.decomposition["residual_part"]) / abs(
        at_release.decomposition["stationary_part"])
    out = cp.moving_force(ATOM, 2.0 * R0, R0).decomposition["residual_part"]
    back = cp.moving_force(ATOM, 0.5 * R0, R0).decomposition["residual_part"]
    directions_ok = out < 0.0 < back
    grad_devs = []
    for R in (0.5, 1.0, 2.0):
        f = cp.moving_force(ATOM, R, R0).force_z
        dU = derivative_n(lambda r: cp.moving_potential(ATOM, r, R0), R, 1, h=0.02 * R)
        grad_devs.append(abs(f + dU) / abs(f))
    ok = rel_residual <= 1e-10 and directions_ok and all(d <= 1e-6 for d in grad_devs)
    return _result(4, "moving atom residual force", 30.0, t0, ok,
                   f"residual@R0={rel_residual:.1e}, pull-back={directions_ok}, "
                   f"max grad dev={max(grad_devs):.1e}")


def criterion_5() -> CriterionResult:
    """Accelerated N and D shift-invariant to 1e-8 after extrapolation."""
    t0 = time.perf_counter()
    spec = dk.KernelSpec(AcceleratedTrajectory(alpha=1.0), epsilon=0.05)
    base = dk.extrapolated_kernels(spec, 0.8, -0.2)
    worst = 0.0
    for s in (0.3, 0.7, 1.3):
        shifted = dk.extrapolated_kernels(spec, 0.8 + s, -0.2 + s)
        scale = abs(base.noise)
        worst = max(worst,
                    abs(shifted.noise - base.noise) / scale,
                    abs(shifted.dissipation - base.dissipation) / scale)
    ok = worst <= 1e-8
    return _result(5, "kernel stationarity", 10.0, t0, ok, f"max shift={worst:.2e}")


def criterion_6() -> CriterionResult:
    """Accelerated noise = inertial thermal noise at T_U, and accelerated
    dissipation = inertial vacuum dissipation, both to 1e-6."""
    t0 = time.perf_counter()
    alpha = 1.0
    t_u = unruh_temperature(alpha)
    worst_noise = 0.0
    for dtau in (0.5, 1.0, 2.0):
        acc = dk.extrapolated_kernels(
            dk.KernelSpec(AcceleratedTrajectory(alpha), epsilon=0.05),
            0.5 * dtau, -0.5 * dtau)
        th = dk.thermal_inertial_noise_extrapolated(t_u, 0.5 * dtau, -0.5 * dtau)
        worst_noise = max(worst_noise, abs(acc.noise - th) / abs(th))
    report = dk.dissipation_equivalence_check(alpha, [0.5, 1.0, 2.0])
    ok = worst_noise <= 1e-6 and report.max_relative_deviation <= 1e-6
    return _result(6, "Unruh thermality", 30.0, t0, ok,
                   f"noise dev={worst_noise:.2e}, dissipation dev="
                   f"{report.max_relative_deviation:.2e}")


def criterion_7() -> CriterionResult:
    """Adiabatic |I2|^2/|I1|^2 = exp(-2 pi omega/alpha) to 1e-4 relative."""
    t0 = time.perf_counter()
    worst = 0.0
    for woa in (0.5, 1.0, 2.0):
        spec = cavity.CavitySpec(nu=1.0, omega=woa, alpha=1.0, lambda_coupling=1.0,
                                 T_transit=math.inf, injection_rate=1.0)
        i1 = cavity.amplitude_I1(spec, "adiabatic_past_only")
        i2 = cavity.amplitude_I2(spec, "adiabatic_past_only")
        ratio = abs(i2) ** 2 / abs(i1) ** 2
        worst = max(worst, abs(ratio / math.exp(-2 * math.pi * woa) - 1.0))
    ok = worst <= 1e-4
    return _result(7, "adiabatic Boltzmann ratio", 60.0, t0, ok,
                   f"max rel dev={worst:.2e}")


def criterion_8() -> CriterionResult:
    """Sudden switch-on at nu/omega = 100, omega/alpha = 100: R2/R1 within 15%
    of alpha/(2 pi omega); emission within 10% of lambda^2/nu^2 and moving
    < 5% under alpha -> 2 alpha."""
    t0 = time.perf_counter()
    omega = 100.0
    nu = 100.0 * omega

    def spec_at(alpha):
        return cavity.CavitySpec(nu=nu, omega=omega, alpha=alpha, lambda_coupling=1.0,
                                 T_transit=2.0 * math.log(nu / omega) / alpha,
                                 injection_rate=1.0)

    res = cavity.rates(spec_at(1.0))
    asym = 1.0 / (2.0 * math.pi * omega)
    ratio_dev = abs(res.R2 / res.R1 - asym) / asym
    em1 = cavity.emission_rate_sudden(spec_at(1.0))
    em2 = cavity.emission_rate_sudden(spec_at(2.0))
    em_dev = abs(em1.ratio - 1.0)
    accel_dev = abs(em2.numerical / em1.numerical - 1.0)
    ok = ratio_dev <= 0.15 and em_dev <= 0.10 and accel_dev < 0.05
    return _result(8, "sudden-switch enhancement", 120.0, t0, ok,
                   f"R2/R1 dev={ratio_dev:.3f}, emission dev={em_dev:.3f}, "
                   f"alpha-doubling shift={accel_dev:.4f}")


def criterion_9() -> CriterionResult:
    """Master equation: trace to 1e-12, geometric steady state by drift
    substitution to 1e-12, n-bar to 1e-6, Boltzmann-consistent temperature."""
    t0 = time.perf_counter()
    r = (1.0, 0.5)
    evolved = me.evolve(me.PhotonDistribution.vacuum(60), r, t_final=40.0)
    trace_dev = abs(evolved.trace - 1.0)
    ss = me.steady_state(r)
    drift_norm = float(np.max(np.abs(me.drift(ss, r))))
    nbar_dev = abs(evolved.mean_occupation - 1.0)
    t_c = me.cavity_temperature(r, nu=1.0)
    boltz_dev = abs(0.5 - math.exp(-1.0 / t_c))
    ok = (trace_dev <= 1e-12 and drift_norm <= 1e-12
          and nbar_dev <= 1e-6 and boltz_dev <= 1e-12)
    return _result(9, "master equation", 10.0, t0, ok,
                   f"trace={trace_dev:.1e}, drift={drift_norm:.1e}, "
                   f"nbar={nbar_dev:.1e}, boltzmann={boltz_dev:.1e}")


def criterion_10() -> CriterionResult:
    """Constant-velocity ratio: zero-numerator case, T -> 0 limit, Doppler
    substitution identity at v = 0.6c."""
    t0 = time.perf_counter()
    omega = 1.0
    zero_case = cavity.ratio_constant_velocity(3.0 * omega, omega, 0.0,
                                               math.pi / (2 * omega))
    nu = 3.0
    small_T = cavity.ratio_constant_velocity(nu, omega, 0.0, 1e-3 / (nu + omega))
    moving = cavity.ratio_constant_velocity(4.0, 1.3, 0.6, 0.9)
    static = cavity.ratio_constant_velocity(2.0, 1.3, 0.0, 0.9)
    doppler_dev = abs(moving - static) / static
    ok = zero_case < 1e-10 and abs(small_T - 1.0) <= 1e-3 and doppler_dev <= 1e-12
    return _result(10, "constant-velocity formula", 5.0, t0, ok,
                   f"zero-case={zero_case:.1e}, T->0 dev={abs(small_T - 1):.1e}, "
                   f"doppler dev={doppler_dev:.1e}")


def criterion_11() -> CriterionResult:
    """Oracle agreement: mode integrals vs light-cone closed forms to 1e-10;
    rotated-contour vs regulated amplitudes to 1e-8."""
    t0 = time.perf_counter()
    worst_kernel = 0.0
    for spec, t1, t2 in (
        (dk.KernelSpec(InertialTrajectory(), epsilon=0.01), 0.5, -0.5),
        (dk.KernelSpec(AcceleratedTrajectory(1.0), epsilon=0.01), 0.5, -0.5),
    ):
        brute = dk.mode_integral_two_point(spec, t1, t2)
        closed = dk.two_point_derivative(spec, t1, t2, prescription="plain")
        worst_kernel = max(worst_kernel, abs(brute - closed) / abs(closed))
    worst_amp = 0.0
    for woa, T in ((1.0, math.inf), (0.5, 3.0)):
        spec = cavity.CavitySpec(nu=1.3, omega=woa, alpha=1.0, lambda_coupling=1.0,
                                 T_transit=T, injection_rate=1.0)
        regulated = cavity.amplitude_I1(spec, "adiabatic_past_only")
        oracle = cavity.amplitude_adiabatic_contour_oracle(spec)
        worst_amp = max(worst_amp, abs(regulated - oracle) / abs(oracle))
    ok = worst_kernel <= 1e-10 and worst_amp <= 1e-8
    return _result(11, "oracle agreement", 60.0, t0, ok,
                   f"kernel dev={worst_kernel:.2e}, amplitude dev={worst_amp:.2e}")


ALL_CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
                criterion_11)


def run_all(numbers=None, echo=True) -> list[CriterionResult]:
    """Run the acceptance criteria (all, or the 1-based subset in `numbers`)
    and return their results, printing one line each when echo is set."""
    selected = ALL_CRITERIA if not numbers else [ALL_CRITERIA[n - 1] for n in numbers]
    results = []
    for fn in selected:
        res = fn()
        results.append(res)
        if echo:
            print(res.line(), flush=True)
    return results
