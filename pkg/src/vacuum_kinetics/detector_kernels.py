"""Noise and dissipation kernels of a derivative-coupled detector on a 1+1D
massless scalar field in the Minkowski vacuum.

The two-point function of dphi/dtau along a worldline decomposes over null
coordinates u = t - x, v = t + x as

    W(tau1, tau2) = -(1/4 pi) [ u1' u2'/(du - i e q_u)^2 + v1' v2'/(dv - i e q_v)^2 ],

with du = u(tau1) - u(tau2) and primes denoting d/dtau.  The noise kernel is
Re W (anticommutator), the dissipation kernel -Im W (commutator).  Two
regulator prescriptions are provided:

* "proper": q = sqrt(u1' u2'), an -i epsilon displacement measured in the
  detector's own frame.  It is boost covariant, so the accelerated kernels are
  exactly stationary at finite epsilon and the inertial kernels are exactly
  velocity independent.  This is the production default.
* "plain": q = 1, the textbook displacement of the null coordinates.  It
  matches the frequency-space regulator exp(-eps*omega) of the brute-force
  mode integral term by term and serves as the oracle prescription.

Both agree on symmetric time pairs (tau1 = -tau2 on the hyperbola) and in the
extrapolated epsilon -> 0 limit.  Everything here works in natural units;
temperatures convert through hbar/kB at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOLERANCES, NATURAL, DomainError, Tolerances, UnitSystem
from .quadrature import (
    extrapolate_regulator,
    integrate_oscillatory_regulated,
    regulator_ladder,
)
from .trajectory import AcceleratedTrajectory, InertialTrajectory, lightcone

_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class KernelSpec:
    """Worldline, coupling, short-distance regulator and optional smearing
    scale for kernel evaluation.

    The kernels are reported without coupling weight; consumers multiply by
    coupling_lambda**2 where the interaction strength matters.
    """

    trajectory: AcceleratedTrajectory | InertialTrajectory
    coupling_lambda: float = 1.0
    epsilon: float = 1e-3
    smearing_sigma: float = 0.0

    def __post_init__(self):
        if not (self.epsilon > 0.0):
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")
        if self.smearing_sigma < 0.0:
            raise DomainError(f"smearing_sigma must be >= 0, got {self.smearing_sigma}")


@dataclass(frozen=True)
class KernelSample:
    """One kernel evaluation; noise is symmetric and dissipation antisymmetric
    under tau1 <-> tau2."""

    tau1: float
    tau2: float
    noise: float
    dissipation: float


def _pair_term(du, q1, q2, eps, prescription):
    qd = math.sqrt(q1 * q2)
    shift = qd if prescription == "proper" else 1.0
    return q1 * q2 / (du - 1j * eps * shift) ** 2


def two_point_derivative(spec: KernelSpec, tau1: float, tau2: float,
                         prescription: str = "proper") -> complex:
    """Regulated Wightman function of dphi/dtau at (tau1, tau2).

    Finite for every argument pair while epsilon > 0; epsilon = 0 is rejected
    because the unregulated kernel is a distribution.
    """
    if prescription not in ("proper", "plain"):
        raise DomainError(f"unknown prescription {prescription!r}")
    eps = spec.epsilon
    u1, v1, ud1, vd1 = lightcone(spec.trajectory, tau1)
    u2, v2, ud2, vd2 = lightcone(spec.trajectory, tau2)
    term_u = _pair_term(u1 - u2, ud1, ud2, eps, prescription)
    term_v = _pair_term(v1 - v2, vd1, vd2, eps, prescription)
    return -(term_u + term_v) / _FOUR_PI


def noise_kernel(spec: KernelSpec, tau1: float, tau2: float) -> float:
    """Symmetric (anticommutator) kernel at the spec's epsilon."""
    return two_point_derivative(spec, tau1, tau2).real


def dissipation_kernel(spec: KernelSpec, tau1: float, tau2: float) -> float:
    """Antisymmetric (commutator) kernel at the spec's epsilon; O(epsilon) for
    timelike separated points and identically zero at equal times."""
    return -two_point_derivative(spec, tau1, tau2).imag


def extrapolated_kernels(spec: KernelSpec, tau1: float, tau2: float,
                         levels: int = 6) -> KernelSample:
    """Noise and dissipation extrapolated epsilon -> 0 from a halving ladder
    seeded at the spec's epsilon."""
    samples = []
    for eps in regulator_ladder(spec.epsilon, levels):
        w = two_point_derivative(
            KernelSpec(spec.trajectory, spec.coupling_lambda, eps), tau1, tau2)
        samples.append((eps, w))
    limit = extrapolate_regulator(samples)
    return KernelSample(tau1, tau2, limit.value.real, -limit.value.imag)


def accelerated_noise_closed_form(alpha: float, dtau: float) -> float:
    """Epsilon -> 0 noise kernel on the hyperbola, a function of the proper
    interval only: -(alpha^2/8 pi)/sinh^2(alpha dtau/2)."""
    if dtau == 0.0:
        raise DomainError("closed form is singular at equal times")
    return -(alpha**2 / (8.0 * math.pi)) / math.sinh(0.5 * alpha * dtau) ** 2


def thermal_inertial_noise(temperature: float, tau1: float, tau2: float,
                           epsilon: float, units: UnitSystem = NATURAL) -> float:
    """Noise kernel of a static detector when the field is thermal at the
    given temperature, regulated like the vacuum kernel.

    The thermal Wightman function is the image sum of the vacuum one over
    imaginary-time shifts n*hbar/(kB T), which resums to
    -(pi T'^2/2) / sinh^2(pi T' (dtau - i eps)) with T' = kB T/hbar.
    """
    if not (temperature > 0.0):
        raise DomainError(f"temperature must be positive, got {temperature}")
    if not (epsilon > 0.0):
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    t_rate = units.kB * temperature / units.hbar
    z = math.pi * t_rate * complex(tau1 - tau2, -epsilon)
    # guard against overflow at large real argument: kernel decays like exp(-2|Re z|)
    if abs(z.real) > 300.0:
        return 0.0
    w = -(math.pi * t_rate**2 / 2.0) / np.sinh(z) ** 2
    return w.real


def thermal_inertial_noise_extrapolated(temperature: float, tau1: float, tau2: float,
                                        epsilon0: float = 0.05, levels: int = 6,
                                        units: UnitSystem = NATURAL) -> float:
    samples = []
    for eps in regulator_ladder(epsilon0, levels):
        t_rate = units.kB * temperature / units.hbar
        z = math.pi * t_rate * complex(tau1 - tau2, -eps)
        samples.append((eps, -(math.pi * t_rate**2 / 2.0) / np.sinh(z) ** 2))
    return extrapolate_regulator(samples).value.real


@dataclass(frozen=True)
class EquivalenceReport:
    """Result of comparing accelerated and inertial kernels over a grid of
    proper-time lags.  Deviations are normalized by the local noise magnitude,
    the natural scale of the kernel pair."""

    alpha: float
    dtau_grid: tuple[float, ...]
    max_relative_deviation: float
    deviations: tuple[float, ...]


def dissipation_equivalence_check(alpha: float, grid, epsilon0: float = 0.05,
                                  levels: int = 6) -> EquivalenceReport:
    """Max deviation between accelerated and inertial-vacuum dissipation
    kernels after regulator extrapolation.

    Both extrapolate to zero away from coincidence (the commutator is
    supported on the light cone), so the deviation is measured against the
    noise kernel at the same lag.  The regulator ladder is seeded at
    epsilon0 * |dtau| so the displacement stays small against the separation
    at every grid point.
    """
    if not (alpha > 0.0):
        raise DomainError(f"alpha must be positive, got {alpha}")
    devs = []
    for dtau in grid:
        eps0 = epsilon0 * abs(dtau)
        acc = KernelSpec(AcceleratedTrajectory(alpha=alpha), epsilon=eps0)
        inert = KernelSpec(InertialTrajectory(v=0.0), epsilon=eps0)
        ka = extrapolated_kernels(acc, 0.5 * dtau, -0.5 * dtau, levels)
        ki = extrapolated_kernels(inert, 0.5 * dtau, -0.5 * dtau, levels)
        scale = max(abs(ka.noise), abs(ki.noise))
        devs.append(abs(ka.dissipation - ki.dissipation) / scale)
    return EquivalenceReport(alpha, tuple(grid), max(devs), tuple(devs))


def mode_integral_two_point(spec: KernelSpec, tau1: float, tau2: float,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Brute-force frequency-space evaluation of the two-point function,

        int_0^inf (w dw/4 pi) e^{-eps w} [u1' u2' e^{-i w du} + v1' v2' e^{-i w dv}],

    the independent oracle for the light-cone closed form.  The exp(-eps*w)
    regulator reproduces the "plain" -i epsilon prescription exactly.
    """
    eps = spec.epsilon
    u1, v1, ud1, vd1 = lightcone(spec.trajectory, tau1)
    u2, v2, ud2, vd2 = lightcone(spec.trajectory, tau2)
    total = 0.0 + 0.0j
    for dw, w1, w2 in ((u1 - u2, ud1, ud2), (v1 - v2, vd1, vd2)):
        res = integrate_oscillatory_regulated(
            lambda w: w * (w1 * w2) / _FOUR_PI, phase_rate=-dw, epsilon=eps, tol=tol)
        total += res.value
    return total


def smeared_kernel(spec: KernelSpec, tau1: float, tau2: float,
                   nodes: int = 80) -> KernelSample:
    """Kernels of a detector smeared transverse to an accelerated worldline.

    The detector is spread over hyperbolae at constant proper distances d with
    Gaussian weight exp(-d^2/sigma^2); the kernel is the double average of the
    cross two-point function between trajectories at distances d and d'.  The
    companion worldlines share the detector's Rindler time, so at detector
    proper time tau the d-trajectory contributes null data

        u_d(tau) = -(1 + alpha d)/alpha * e^{-alpha tau},  du_d/dtau = (1 + alpha d) e^{-alpha tau},

    and similarly for v.  Antisymmetry of the dissipation kernel survives the
    averaging because the weight is symmetric in (d, d').
    """
    traj = spec.trajectory
    if not isinstance(traj, AcceleratedTrajectory):
        raise DomainError("smeared kernels are defined for accelerated trajectories")
    sigma = spec.smearing_sigma
    if not (sigma > 0.0):
        raise DomainError("smearing_sigma must be positive for smeared_kernel")
    alpha, eps = traj.alpha, spec.epsilon

    # stay clear of the horizon at d = -1/alpha
    span = min(6.0 * sigma, 0.9 / alpha)
    x, w = np.polynomial.legendre.leggauss(nodes)
    d = span * x
    weight = w * np.exp(-(d / sigma) ** 2)
    norm = weight.sum()

    scale = 1.0 + alpha * d
    eu1 = math.exp(-alpha * tau1)
    eu2 = math.exp(-alpha * tau2)
    u1 = -(scale / alpha) * eu1
    u2 = -(scale / alpha) * eu2
    ud1 = scale * eu1
    ud2 = scale * eu2
    v1 = (scale / alpha) / eu1
    v2 = (scale / alpha) / eu2
    vd1 = scale / eu1
    vd2 = scale / eu2

    def averaged(a1, a2, p1, p2):
        da = a1[:, None] - a2[None, :]
        pp = p1[:, None] * p2[None, :]
        term = pp / (da - 1j * eps * np.sqrt(pp)) ** 2
        return np.sum(weight[:, None] * weight[None, :] * term) / norm**2

    wtot = -(averaged(u1, u2, ud1, ud2) + averaged(v1, v2, vd1, vd2)) / _FOUR_PI
    return KernelSample(tau1, tau2, wtot.real, -wtot.imag)


def smeared_kernel_extrapolated(spec: KernelSpec, tau1: float, tau2: float,
                                levels: int = 5, nodes: int = 80) -> KernelSample:
    """Regulator-extrapolated smeared kernels (finite for separated times when
    the smearing keeps the cross light cones away from the weight support)."""
    samples = []
    for eps in regulator_ladder(spec.epsilon, levels):
        s = smeared_kernel(
            KernelSpec(spec.trajectory, spec.coupling_lambda, eps, spec.smearing_sigma),
            tau1, tau2, nodes=nodes)
        samples.append((eps, complex(s.noise, -s.dissipation)))
    limit = extrapolate_regulator(samples)
    return KernelSample(tau1, tau2, limit.value.real, -limit.value.imag)


def kernel_grid_records(spec: KernelSpec, dtau_grid, levels: int = 6):
    """Per-lag records (dtau, N, D, epsilon, extrapolated flag) for export."""
    records = []
    for dtau in dtau_grid:
        n_fixed = noise_kernel(spec, 0.5 * dtau, -0.5 * dtau)
        d_fixed = dissipation_kernel(spec, 0.5 * dtau, -0.5 * dtau)
        ext = extrapolated_kernels(spec, 0.5 * dtau, -0.5 * dtau, levels)
        records.append({
            "dtau": dtau,
            "noise": n_fixed,
            "dissipation": d_fixed,
            "epsilon": spec.epsilon,
            "noise_extrapolated": ext.noise,
            "dissipation_extrapolated": ext.dissipation,
            "extrapolated": True,
        })
    return records
