"""Photon-number evolution of the cavity mode under the coarse-grained
birth-death master equation

    dp_n/dt = -R2 [(n+1) p_n - n p_{n-1}] - R1 [n p_n - (n+1) p_{n+1}],

driven by the per-atom absorption and emission coefficients R1 and R2.  Only
the diagonal (coherence-free) occupations appear.  On the truncated ladder
n = 0..N_max the upward transition out of N_max is dropped, which keeps the
generator exactly trace conserving; the tail criterion p_{N_max} < 1e-10
certifies that the truncation does not matter.

For R1 > R2 detailed balance R1 n p_n = R2 n p_{n-1} fixes the geometric
stationary distribution p_n = (1-q) q^n with q = R2/R1, a thermal state whose
temperature follows from the Boltzmann consistency condition
q = exp(-hbar nu / kB T_c):

    T_c = hbar nu / (kB ln(R1/R2)).

The printed variant (hbar nu/kB) * ln(R1/R2) floating around in the
literature fails that consistency condition (and the q -> 1 limit); it is
reported by :func:`cavity_temperature_printed_form` for reference output but
never used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NATURAL, DomainError, UnitSystem


class TruncationError(RuntimeError):
    """The occupation ladder is too short for the requested evolution."""


@dataclass(frozen=True)
class PhotonDistribution:
    """Diagonal photon-number occupations p_0..p_{N_max}."""

    p: np.ndarray
    N_max: int

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float)
        object.__setattr__(self, "p", arr)
        if arr.shape != (self.N_max + 1,):
            raise DomainError(f"p must have length N_max + 1 = {self.N_max + 1}")
        if np.any(arr < -1e-12):
            raise DomainError("occupation probabilities must be non-negative")
        if abs(arr.sum() - 1.0) > 1e-12:
            raise DomainError(f"probabilities must sum to 1, got {arr.sum()!r}")

    @classmethod
    def vacuum(cls, N_max: int) -> "PhotonDistribution":
        p = np.zeros(N_max + 1)
        p[0] = 1.0
        return cls(p, N_max)

    @classmethod
    def number_state(cls, n: int, N_max: int) -> "PhotonDistribution":
        if not (0 <= n <= N_max):
            raise DomainError(f"n must lie in [0, {N_max}]")
        p = np.zeros(N_max + 1)
        p[n] = 1.0
        return cls(p, N_max)

    @property
    def mean_occupation(self) -> float:
        return float(np.arange(self.N_max + 1) @ self.p)

    @property
    def trace(self) -> float:
        return float(self.p.sum())


def _rate_pair(rates) -> tuple[float, float]:
    """Accept a TransitionRates-like object or a (R1, R2) pair."""
    if hasattr(rates, "R1"):
        r1, r2 = float(rates.R1), float(rates.R2)
    else:
        r1, r2 = map(float, rates)
    if r1 < 0.0 or r2 < 0.0:
        raise DomainError("rates must be non-negative")
    return r1, r2


def _drift_vector(p: np.ndarray, r1: float, r2: float) -> np.ndarray:
    n = np.arange(len(p), dtype=float)
    up = r2 * (n + 1.0) * p          # emission n -> n+1
    up[-1] = 0.0                     # reflective truncation
    down = r1 * n * p                # absorption n -> n-1
    dp = -(up + down)
    dp[1:] += up[:-1]
    dp[:-1] += down[1:]
    return dp


def drift(dist: PhotonDistribution, rates) -> np.ndarray:
    """Right-hand side dp/dt on the truncated ladder.

    Emission moves weight up with factor (n+1), absorption down with factor
    n; the emission channel out of the top level is disabled so the column
    sums vanish identically and the trace is conserved in exact arithmetic.
    """
    r1, r2 = _rate_pair(rates)
    return _drift_vector(dist.p, r1, r2)


def evolve(dist: PhotonDistribution, rates, t_final: float,
           dt: float | None = None) -> PhotonDistribution:
    """March the distribution to t_final with the classical 4th-order
    one-step method.

    The step obeys dt <= 0.1/(R1 (N_max+1)) (and the R2 analogue) for
    stability.  Raises :class:`TruncationError` when the top occupation grows
    beyond the 1e-10 tail criterion, and flags numerical instability.
    """
    if t_final < 0.0:
        raise DomainError(f"t_final must be >= 0, got {t_final}")
    r1, r2 = _rate_pair(rates)
    rate_scale = max(r1, r2) * (dist.N_max + 1)
    if rate_scale == 0.0 or t_final == 0.0:
        return dist
    bound = 0.1 / rate_scale
    step = min(dt, bound) if dt is not None else bound
    n_steps = max(1, int(math.ceil(t_final / step)))
    h = t_final / n_steps
    p = dist.p.copy()
    for _ in range(n_steps):
        k1 = _drift_vector(p, r1, r2)
        k2 = _drift_vector(p + 0.5 * h * k1, r1, r2)
        k3 = _drift_vector(p + 0.5 * h * k2, r1, r2)
        k4 = _drift_vector(p + h * k3, r1, r2)
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(p)) or p.min() < -1e-8:
            raise TruncationError("evolution became unstable; reduce dt")
    if p[-1] > 1e-10 and r1 > r2:
        raise TruncationError(
            f"top-level occupation {p[-1]:.3e} exceeds the 1e-10 tail criterion; "
            "increase N_max")
    # flush roundoff-level negatives without renormalizing: the conservative
    # generator keeps the trace to machine precision on its own
    p = np.where((p < 0.0) & (p > -1e-12), 0.0, p)
    return PhotonDistribution(p, dist.N_max)


def steady_state(rates, N_max: int = 256) -> PhotonDistribution:
    """Geometric stationary distribution p_n = (1-q) q^n, q = R2/R1, computed
    in closed form from detailed balance.

    N_max doubles automatically (up to 2^15) until the truncated tail
    satisfies p_{N_max} < 1e-10.  R1 <= R2 has no normalizable stationary
    state and is rejected.
    """
    r1, r2 = _rate_pair(rates)
    if not (r1 > r2):
        raise DomainError(
            f"no normalizable steady state: need R1 > R2, got R1={r1}, R2={r2}")
    q = r2 / r1
    n_max = int(N_max)
    while True:
        n = np.arange(n_max + 1)
        p = (1.0 - q) * q**n if q > 0.0 else np.where(n == 0, 1.0, 0.0)
        if p[-1] < 1e-10:
            break
        if n_max >= 32768:
            raise TruncationError(
                f"steady-state tail still {p[-1]:.3e} at N_max={n_max}; "
                "q is too close to 1")
        n_max *= 2
    return PhotonDistribution(p / p.sum(), n_max)


def cavity_temperature(rates, nu: float, units: UnitSystem = NATURAL) -> float:
    """Temperature of the thermal stationary state, from Boltzmann consistency
    R2/R1 = exp(-hbar nu / kB T_c):

        T_c = hbar nu / (kB ln(R1/R2)).

    Zero when R2 = 0 (pure absorption empties the cavity); undefined for
    R1 <= R2.
    """
    if not (nu > 0.0):
        raise DomainError(f"nu must be positive, got {nu}")
    r1, r2 = _rate_pair(rates)
    if r2 == 0.0:
        return 0.0
    if not (r1 > r2):
        raise DomainError("temperature undefined unless R1 > R2")
    return units.hbar * nu / (units.kB * math.log(r1 / r2))


def cavity_temperature_printed_form(rates, nu: float,
                                    units: UnitSystem = NATURAL) -> float:
    """The (hbar nu/kB) ln(R1/R2) variant, kept only so reports can show it
    next to the detailed-balance-consistent value; its ratio convention is
    dimensionally inconsistent with the Boltzmann factor it accompanies."""
    r1, r2 = _rate_pair(rates)
    if not (r1 > r2 > 0.0):
        raise DomainError("printed form needs R1 > R2 > 0")
    return units.hbar * nu / units.kB * math.log(r1 / r2)
