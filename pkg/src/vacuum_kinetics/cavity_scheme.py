"""Transition amplitudes and coefficients for two-level atoms injected into a
single-mode cavity: uniformly accelerated atoms with sudden or adiabatic
switch-on, and the constant-velocity comparison case.

For an accelerated atom the absorption amplitude over a proper transit time T
is the window integral

    I1(omega) = int_0^T dtau exp(i (nu/alpha) e^{-alpha tau} + i omega tau - alpha tau),

whose e^{-alpha tau} factor carries both the mode redshift seen by the atom
and the decay of the comoving coupling.  The substitution u = e^{-alpha tau}
turns every variant into a pure-phase power integral,

    I1 = (1/alpha) int_{u0}^{1} u^{-i omega/alpha} e^{i nu u/alpha} du,
    u0 = e^{-alpha T},

with the adiabatic (switch-on in the remote past) variant running to
u = infinity, regulated by e^{-eps u} and extrapolated; a rotated-contour
evaluation of the same integral is kept as an independent oracle.  The
emission amplitude is I2(omega) = I1(-omega), the counter-rotating partner.
Co-propagating modes only; the counter-propagating case is exposed through
the constant-velocity formula where it is defined.

Transition coefficients are R_{1,2} = r lambda^2 |I_{1,2}|^2 for injection
rate r and peak coupling lambda.  Closed-form regime anchors: the adiabatic
ratio R2/R1 = exp(-2 pi omega/alpha); in the sudden regime nu >> omega >>
alpha the ratio rises to alpha/(2 pi omega) while the emission rate
lambda^2 |I2|^2 ~= lambda^2/nu^2 loses all memory of the acceleration.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_TOLERANCES, NATURAL, DomainError, Tolerances, UnitSystem
from .quadrature import (
    extrapolate_regulator,
    integrate_oscillatory_regulated,
    integrate_semi_infinite,
    regulator_ladder,
)
from .trajectory import doppler_frequency

_X16, _W16 = np.polynomial.legendre.leggauss(16)

AMPLITUDE_MODES = ("full_sudden", "adiabatic_past_only", "window_only")


class OnResonanceError(ArithmeticError):
    """The constant-velocity ratio was requested at a pole of the resonant
    window factor."""


class OutOfRegimeWarning(UserWarning):
    """An asymptotic formula was evaluated outside its derivation regime."""


@dataclass(frozen=True)
class CavitySpec:
    """Cavity mode frequency nu, atomic frequency omega, acceleration
    parameter alpha (0 selects the inertial path), peak coupling lambda,
    proper transit time T and mean injection rate r."""

    nu: float
    omega: float
    alpha: float
    lambda_coupling: float
    T_transit: float
    injection_rate: float
    propagation: str = "co"

    def __post_init__(self):
        if not (self.nu > 0.0 and self.omega > 0.0):
            raise DomainError("nu and omega must be positive")
        if self.alpha < 0.0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")
        if not (self.T_transit > 0.0):
            raise DomainError(f"T_transit must be positive, got {self.T_transit}")
        if not (self.injection_rate > 0.0):
            raise DomainError(f"injection_rate must be positive, got {self.injection_rate}")
        if self.propagation not in ("co", "counter"):
            raise DomainError(f"propagation must be 'co' or 'counter', got {self.propagation}")


@dataclass(frozen=True)
class TransitionRates:
    """Absorption/emission coefficients with their amplitudes and the
    regulator/regime diagnostics of the evaluation."""

    R1: float
    R2: float
    I1: complex
    I2: complex
    flags: tuple[str, ...] = ()
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.R1 < 0.0 or self.R2 < 0.0:
            raise DomainError("transition coefficients must be non-negative")


def _log_phase_segment(b: float, p: float, eps: float, u_lo: float, u_hi: float):
    """int_{u_lo}^{u_hi} u^{-ib} e^{(ip - eps) u} du on a logarithmic grid,
    resolving the b*ln(u) phase near zero."""
    s_lo, s_hi = math.log(u_lo), math.log(u_hi)
    freq_log = abs(b) + (abs(p) + eps) * u_hi  # phase rate in s = ln u
    n = max(8, int(math.ceil((s_hi - s_lo) * freq_log / math.pi)) + 1)
    n = min(n, 400_000)
    edges = np.linspace(s_lo, s_hi, n + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    total = 0.0 + 0.0j
    for i in range(0, n, 8192):
        m = mid[i:i + 8192]
        h = half[i:i + 8192]
        s = m[:, None] + h[:, None] * _X16[None, :]
        u = np.exp(s)
        vals = u * np.exp(-1j * b * s + (1j * p - eps) * u)
        total += complex(np.sum(vals * _W16[None, :] * h[:, None]))
    return total


def _power_phase_integral(b: float, p: float, u0: float, u1: float | None,
                          eps: float, tol: Tolerances) -> complex:
    """int u^{-ib} e^{(ip - eps) u} du over [u0, u1], or [u0, inf) when u1 is
    None.  The head below u ~ 1/p is integrated on a log grid (the power
    factor oscillates in ln u down to u0 = 0), the rest with phase-tracking
    chunks."""
    u_break = min(1.0 / abs(p), u1 if u1 is not None else math.inf)
    total = 0.0 + 0.0j
    lo = u0
    if u0 < u_break:
        lo_log = u0
        if u0 == 0.0:
            # [0, delta] in closed series: int_0^d u^{-ib} e^{qu} du
            #   = d^{1-ib} [1/(1-ib) + qd/(2-ib) + (qd)^2/(2(3-ib)) + ...]
            delta = u_break * 1e-4
            q = complex(-eps, p)
            qd = q * delta
            series = (1.0 / complex(1.0, -b) + qd / complex(2.0, -b)
                      + qd * qd / (2.0 * complex(3.0, -b)))
            total += delta * cmath.exp(-1j * b * math.log(delta)) * series
            lo_log = delta
        total += _log_phase_segment(b, p, eps, lo_log, u_break)
        lo = u_break
    if u1 is not None and u1 <= lo:
        return total
    if u1 is None:
        res = integrate_oscillatory_regulated(
            lambda u: np.exp(-1j * b * np.log(u)), phase_rate=p, epsilon=eps,
            tol=tol, lower=lo, extra_phase_rate=lambda u: abs(b) / u)
        total += res.value
    elif u1 > lo:
        freq = lambda u: abs(p) + eps + abs(b) / u
        edges = [lo]
        u = lo
        while u < u1:
            u += math.pi / freq(u)
            edges.append(min(u, u1))
        edges = np.array(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        for i in range(0, len(mid), 8192):
            m = mid[i:i + 8192]
            h = half[i:i + 8192]
            uu = m[:, None] + h[:, None] * _X16[None, :]
            vals = np.exp(-1j * b * np.log(uu) + (1j * p - eps) * uu)
            total += complex(np.sum(vals * _W16[None, :] * h[:, None]))
    return total


def _amplitude(nu: float, omega: float, alpha: float, T: float, mode: str,
               tol: Tolerances):
    """(value, error_estimate) of the window amplitude for a signed omega."""
    b = omega / alpha
    p = nu / alpha
    u0 = math.exp(-alpha * T) if math.isfinite(T) else 0.0
    if mode == "full_sudden":
        value = _power_phase_integral(b, p, u0, 1.0, 0.0, tol) / alpha
        return value, abs(value) * 1e-12
    if mode in ("adiabatic_past_only", "window_only"):
        samples = []
        for eps in regulator_ladder(tol.epsilon_regulator * p, tol.richardson_levels):
            if mode == "adiabatic_past_only":
                value = (_power_phase_integral(b, p, u0, 1.0, eps, tol)
                         + _power_phase_integral(b, p, 1.0, None, eps, tol))
            else:
                # difference of the adiabatic integrals at upper limits T and
                # 0: the infinite tails cancel, the shared regulator remains
                value = _power_phase_integral(b, p, u0, 1.0, eps, tol)
            samples.append((eps, value / alpha))
        limit = extrapolate_regulator(samples)
        return limit.value, limit.error_estimate
    raise DomainError(f"unknown amplitude mode {mode!r}; use one of {AMPLITUDE_MODES}")


def _amplitude_inertial(nu: float, omega: float, T: float):
    """Window amplitude for an atom at rest: int_0^T e^{i(omega - nu) tau} dtau."""
    d = omega - nu
    if d == 0.0:
        return complex(T, 0.0)
    return (cmath.exp(1j * d * T) - 1.0) / (1j * d)


def amplitude_I1(spec: CavitySpec, mode: str = "full_sudden",
                 omega: float | None = None,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Absorption window amplitude I1.

    mode selects the switch-on convention: "full_sudden" integrates the
    physical window [0, T]; "adiabatic_past_only" extends it to tau = -inf
    with the regulator extrapolated away; "window_only" evaluates the
    difference of the two adiabatic integrals (upper limits T and 0), which
    must reproduce full_sudden.  Pass omega = -spec.omega for the emission
    partner (see :func:`amplitude_I2`).  alpha = 0 is served by the inertial
    window amplitude; adiabatic modes require acceleration.
    """
    w = spec.omega if omega is None else omega
    if spec.alpha == 0.0:
        if mode != "full_sudden":
            raise DomainError(
                "alpha = 0 has no redshift; only the full_sudden window exists "
                "on the constant-velocity path")
        return _amplitude_inertial(spec.nu, w, spec.T_transit)
    if spec.propagation != "co":
        raise DomainError("accelerated amplitudes are defined for the co-propagating mode")
    value, _ = _amplitude(spec.nu, w, spec.alpha, spec.T_transit, mode, tol)
    return value


def amplitude_I2(spec: CavitySpec, mode: str = "full_sudden",
                 tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Emission amplitude I2(omega) = I1(-omega)."""
    return amplitude_I1(spec, mode, omega=-spec.omega, tol=tol)


def amplitude_adiabatic_contour_oracle(spec: CavitySpec, omega: float | None = None,
                                       tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """Independent rotated-contour evaluation of the adiabatic amplitude.

    The integrand u^{-i omega/alpha} e^{i nu u/alpha} is analytic in the upper
    half u-plane and vanishes there at infinity, so the real-axis tail from
    u0 equals the exponentially convergent vertical-line integral
    i e^{i p u0} int_0^inf (u0 + i y)^{-ib} e^{-p y} (...) dy.  No regulator is
    involved, which is what makes this an oracle for the regulated route.
    """
    if spec.alpha == 0.0:
        raise DomainError("contour oracle applies to the accelerated amplitude")
    w = spec.omega if omega is None else omega
    b = w / spec.alpha
    p = spec.nu / spec.alpha
    u0 = math.exp(-spec.alpha * spec.T_transit) if math.isfinite(spec.T_transit) else 0.0
    anchor = max(u0, 1e-12 / p)

    def integrand(y):
        z = anchor + 1j * y
        return np.exp(-1j * b * np.log(z)) * np.exp(1j * p * z)

    res = integrate_semi_infinite(integrand, decay_rate=p, tol=tol)
    value = 1j * res.value
    if u0 < anchor:
        value += _power_phase_integral(b, p, u0, anchor, 0.0, tol)
    return value / spec.alpha


def rates(spec: CavitySpec, tol: Tolerances = DEFAULT_TOLERANCES) -> TransitionRates:
    """Absorption and emission coefficients R_{1,2} = r lambda^2 |I_{1,2}|^2
    from the sudden-switch window amplitudes.

    Records an out_of_regime flag when the redshift window or the scale
    separation nu >> alpha fails (the cavity must be large against the mode
    wavelength for the pointlike-transit treatment to apply).
    """
    if spec.alpha == 0.0:
        i1 = _amplitude_inertial(spec.nu, spec.omega, spec.T_transit)
        i2 = _amplitude_inertial(spec.nu, -spec.omega, spec.T_transit)
        err1 = err2 = 0.0
    else:
        if spec.propagation != "co":
            raise DomainError("accelerated rates are defined for the co-propagating mode")
        i1, err1 = _amplitude(spec.nu, spec.omega, spec.alpha, spec.T_transit,
                              "full_sudden", tol)
        i2, err2 = _amplitude(spec.nu, -spec.omega, spec.alpha, spec.T_transit,
                              "full_sudden", tol)
    lam2 = spec.lambda_coupling**2
    r1 = spec.injection_rate * lam2 * abs(i1) ** 2
    r2 = spec.injection_rate * lam2 * abs(i2) ** 2
    flags = []
    if spec.alpha > 0.0:
        if math.exp(-spec.alpha * spec.T_transit) > 0.1 or spec.nu < 10.0 * spec.alpha:
            flags.append("out_of_regime")
    return TransitionRates(
        R1=r1, R2=r2, I1=i1, I2=i2, flags=tuple(flags),
        diagnostics={"amplitude_error_I1": err1, "amplitude_error_I2": err2},
    )


def ratio_adiabatic(omega: float, alpha: float) -> float:
    """Detailed-balance ratio exp(-2 pi omega / alpha) of emission to
    absorption when the interaction has been on since the remote past."""
    if not (omega >= 0.0):
        raise DomainError(f"omega must be >= 0, got {omega}")
    if not (alpha > 0.0):
        raise DomainError(f"alpha must be positive, got {alpha}")
    return math.exp(-2.0 * math.pi * omega / alpha)


def ratio_sudden_asymptotic(omega: float, alpha: float) -> float:
    """Sudden-switch ratio alpha/(2 pi omega), valid for nu >> omega >> alpha;
    warns when omega/alpha < 10."""
    if not (omega > 0.0 and alpha > 0.0):
        raise DomainError("omega and alpha must be positive")
    if omega < 10.0 * alpha:
        warnings.warn(
            f"omega/alpha = {omega / alpha:.3g} is outside the sudden regime "
            "omega >> alpha", OutOfRegimeWarning, stacklevel=2)
    return alpha / (2.0 * math.pi * omega)


@dataclass(frozen=True)
class SuddenEmission:
    """Numerical emission rate lambda^2 |I2|^2 beside its acceleration-free
    asymptote lambda^2/nu^2."""

    numerical: float
    asymptote: float

    @property
    def ratio(self) -> float:
        return self.numerical / self.asymptote


def emission_rate_sudden(spec: CavitySpec, tol: Tolerances = DEFAULT_TOLERANCES) -> SuddenEmission:
    """Per-atom emission rate in the sudden regime and its nu^-2 asymptote."""
    i2 = amplitude_I2(spec, "full_sudden", tol)
    lam2 = spec.lambda_coupling**2
    return SuddenEmission(numerical=lam2 * abs(i2) ** 2, asymptote=lam2 / spec.nu**2)


def ratio_constant_velocity(nu: float, omega: float, v: float, T: float,
                            propagation: str = "co",
                            units: UnitSystem = NATURAL) -> float:
    """Emission/absorption ratio for atoms crossing the cavity at constant
    velocity,

        R2/R1 = |(nu' - omega)/(nu' + omega)|^2
                * |(1 - e^{-i(nu' + omega) T}) / (1 - e^{-i(nu' - omega) T})|^2,

    with nu' the Doppler-shifted mode frequency.  On the absorption resonance
    (nu' - omega) T = 2 pi n the denominator vanishes; such points raise
    :class:`OnResonanceError` rather than returning an overflowing float.
    """
    if not (T > 0.0):
        raise DomainError(f"transit time must be positive, got {T}")
    if not (omega > 0.0):
        raise DomainError(f"omega must be positive, got {omega}")
    nu_p = doppler_frequency(nu, v, copropagating=(propagation == "co"), units=units)
    num_window = abs(1.0 - cmath.exp(-1j * (nu_p + omega) * T))
    den_window = abs(1.0 - cmath.exp(-1j * (nu_p - omega) * T))
    if den_window < 1e-12:
        raise OnResonanceError(
            f"(nu' - omega) T = {(nu_p - omega) * T:.6g} sits on the absorption "
            "resonance; the ratio diverges")
    prefactor = abs((nu_p - omega) / (nu_p + omega)) ** 2
    return prefactor * (num_window / den_window) ** 2
