"""Relativistic worldlines for the detector: uniformly accelerated hyperbolae
and inertial lines, plus Doppler shifts and the redshifted cavity-mode phase.

Proper time tau is the canonical curve parameter throughout; coordinate-time
queries invert t(tau) analytically.  All types are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import NATURAL, DomainError, UnitSystem


@dataclass(frozen=True)
class AcceleratedTrajectory:
    """Hyperbolic worldline t = sinh(alpha tau)/alpha, x = c cosh(alpha tau)/alpha.

    alpha*c is the acceleration read by the instantaneously comoving inertial
    observer.  tau_origin records a redefinition of the proper-time origin
    (injection-time bookkeeping for cavity runs); the worldline functions here
    use raw tau, consumers subtract the origin where their convention needs it.
    """

    alpha: float
    tau_origin: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0.0) or not math.isfinite(self.alpha):
            raise DomainError(f"alpha must be finite and positive, got {self.alpha}")


@dataclass(frozen=True)
class InertialTrajectory:
    """Straight worldline x(tau) = x0 + v*gamma*tau, t(tau) = gamma*tau.

    |v| < c is enforced where a UnitSystem is in scope, since the type itself
    does not know c.
    """

    v: float = 0.0
    x0: float = 0.0


def _check_speed(v: float, units: UnitSystem):
    if not (abs(v) < units.c):
        raise DomainError(f"|v| must be below c={units.c}, got {v}")


def position(traj, tau: float, units: UnitSystem = NATURAL):
    """Coordinates (t, x) at proper time tau."""
    c = units.c
    if isinstance(traj, AcceleratedTrajectory):
        a = traj.alpha
        return (math.sinh(a * tau) / a, c * math.cosh(a * tau) / a)
    if isinstance(traj, InertialTrajectory):
        _check_speed(traj.v, units)
        gamma = 1.0 / math.sqrt(1.0 - (traj.v / c) ** 2)
        return (gamma * tau, traj.x0 + traj.v * gamma * tau)
    raise DomainError(f"unsupported trajectory type {type(traj).__name__}")


def four_velocity(traj, tau: float, units: UnitSystem = NATURAL):
    """(dt/dtau, dx/dtau) at proper time tau."""
    c = units.c
    if isinstance(traj, AcceleratedTrajectory):
        a = traj.alpha
        return (math.cosh(a * tau), c * math.sinh(a * tau))
    if isinstance(traj, InertialTrajectory):
        _check_speed(traj.v, units)
        gamma = 1.0 / math.sqrt(1.0 - (traj.v / c) ** 2)
        return (gamma, gamma * traj.v)
    raise DomainError(f"unsupported trajectory type {type(traj).__name__}")


def lightcone(traj, tau: float, units: UnitSystem = NATURAL):
    """Null coordinates and their proper-time derivatives:
    (u, v, du/dtau, dv/dtau) with u = t - x/c, v = t + x/c.

    Both derivatives are positive for future-directed timelike worldlines.
    For the hyperbola, u = -exp(-alpha tau)/alpha and v = exp(alpha tau)/alpha.
    """
    c = units.c
    if isinstance(traj, AcceleratedTrajectory):
        a = traj.alpha
        return (-math.exp(-a * tau) / a, math.exp(a * tau) / a,
                math.exp(-a * tau), math.exp(a * tau))
    t, x = position(traj, tau, units)
    td, xd = four_velocity(traj, tau, units)
    return (t - x / c, t + x / c, td - xd / c, td + xd / c)


def proper_time_of_coordinate_time(traj: AcceleratedTrajectory, t: float) -> float:
    """Invert t(tau) for the hyperbola: tau = asinh(alpha t)/alpha."""
    return math.asinh(traj.alpha * t) / traj.alpha


def smear(traj: AcceleratedTrajectory, d: float,
          units: UnitSystem = NATURAL) -> AcceleratedTrajectory:
    """Hyperbola at constant proper distance d from traj, as measured by the
    comoving observers: all coordinates scale by (1 + alpha d / c), so the
    acceleration parameter becomes alpha / (1 + alpha d / c).

    The returned trajectory is parametrized by its own proper time, which runs
    (1 + alpha d / c) times faster than the original's; the geometric statement
    "coordinates scaled at every instant" reads
    position(smeared, (1 + alpha d / c) * tau) == (1 + alpha d / c) * position(traj, tau).
    d below -c/alpha would cross the horizon and is rejected.
    """
    if not isinstance(traj, AcceleratedTrajectory):
        raise DomainError("smear is defined for accelerated trajectories only")
    factor = 1.0 + traj.alpha * d / units.c
    if not (factor > 0.0):
        raise DomainError(
            f"smearing distance {d} reaches the horizon (1 + alpha d/c = {factor})")
    return AcceleratedTrajectory(alpha=traj.alpha / factor, tau_origin=traj.tau_origin)


def doppler_frequency(nu: float, v: float, copropagating: bool = True,
                      units: UnitSystem = NATURAL) -> float:
    """Doppler-shifted frequency nu' = nu sqrt((1 - v/c)/(1 + v/c)) of the
    co-propagating mode; the velocity sign flips for the anti-propagating one."""
    if not (nu > 0.0):
        raise DomainError(f"frequency must be positive, got {nu}")
    _check_speed(v, units)
    beta = v / units.c if copropagating else -v / units.c
    return nu * math.sqrt((1.0 - beta) / (1.0 + beta))


def redshifted_mode_phase(traj: AcceleratedTrajectory, nu: float, tau: float,
                          units: UnitSystem = NATURAL) -> float:
    """Phase (nu/alpha) exp(-alpha tau) of a co-propagating mode (wavenumber
    k = +nu/c) along the hyperbola: -nu t(tau) + (nu/c) x(tau) collapses to a
    falling exponential, the increasing redshift seen by the atom."""
    if not isinstance(traj, AcceleratedTrajectory):
        raise DomainError("redshifted_mode_phase requires an accelerated trajectory")
    if not (nu > 0.0):
        raise DomainError(f"frequency must be positive, got {nu}")
    return (nu / traj.alpha) * math.exp(-traj.alpha * tau)
