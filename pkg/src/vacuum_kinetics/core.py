"""Domain types, physical constants, and the dimensionless normalization shared
by all physics modules.

Everything downstream computes internally in natural units (c = hbar = kB = 1)
on the dimensionless distance rho = R*omega0/c; a :class:`UnitSystem` acts only
at the boundary when converting inputs and outputs.  Polarizabilities follow
the Gaussian convention (alpha0 carries dimension length^3), so the asymptotic
laws read literally as -alpha0*hbar*omega0/(8 R^3) and -3*alpha0*hbar*c/(8 pi R^4).
SI consumers divide a Gaussian alpha0 [m^3] by 4*pi*eps0 to recover the SI
polarizability [C m^2/V].
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """Raised when an input violates a documented precondition."""


@dataclass(frozen=True)
class UnitSystem:
    """Values of c, hbar and kB in the caller's unit convention.

    Defaults are natural units.  No general unit algebra is attempted; these
    three constants are the only ones the formulas need.
    """

    c: float = 1.0
    hbar: float = 1.0
    kB: float = 1.0

    def __post_init__(self):
        for name in ("c", "hbar", "kB"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise DomainError(f"UnitSystem.{name} must be finite and positive, got {value}")


NATURAL = UnitSystem()


@dataclass(frozen=True)
class AtomSpec:
    """Atomic transition frequency omega0 [1/time] and static ground-state
    polarizability alpha0 [length^3, Gaussian convention]."""

    omega0: float
    alpha0: float

    def __post_init__(self):
        if not (self.omega0 > 0.0) or not math.isfinite(self.omega0):
            raise DomainError(f"omega0 must be finite and positive, got {self.omega0}")
        if not (self.alpha0 > 0.0) or not math.isfinite(self.alpha0):
            raise DomainError(f"alpha0 must be finite and positive, got {self.alpha0}")


@dataclass(frozen=True)
class Tolerances:
    """Accuracy knobs threaded through the numerical layers.

    epsilon_regulator seeds the e^{-eps*u} regulator ladder for oscillatory
    integrals; richardson_levels is the ladder depth.  max_evaluations bounds
    adaptive subdivision before a non-convergence error is raised.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    epsilon_regulator: float = 0.1
    richardson_levels: int = 6
    max_evaluations: int = 1_000_000

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise DomainError("rel_tol and abs_tol must be positive")
        if not (self.epsilon_regulator > 0.0):
            raise DomainError("epsilon_regulator must be positive")
        if self.richardson_levels < 2:
            raise DomainError("richardson_levels must be at least 2")
        if self.max_evaluations < 1:
            raise DomainError("max_evaluations must be at least 1")


DEFAULT_TOLERANCES = Tolerances()


def to_dimensionless(spec: AtomSpec, R: float, units: UnitSystem = NATURAL) -> float:
    """Map a physical distance to rho = R*omega0/c."""
    if not (R > 0.0):
        raise DomainError(f"distance must be positive, got {R}")
    return R * spec.omega0 / units.c


def from_dimensionless(rho: float, spec: AtomSpec, units: UnitSystem = NATURAL) -> float:
    """Inverse of :func:`to_dimensionless`."""
    if not (rho > 0.0):
        raise DomainError(f"dimensionless distance must be positive, got {rho}")
    return rho * units.c / spec.omega0


def unruh_temperature(alpha: float, units: UnitSystem = NATURAL) -> float:
    """Temperature hbar*alpha/(2 pi kB) perceived by a detector whose proper
    acceleration is alpha*c."""
    if not (alpha > 0.0):
        raise DomainError(f"acceleration parameter must be positive, got {alpha}")
    return units.hbar * alpha / (2.0 * math.pi * units.kB)
