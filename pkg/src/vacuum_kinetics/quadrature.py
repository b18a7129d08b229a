"""Numerical integration and differentiation engines.

Three pieces of machinery back the physics modules:

* semi-infinite integrals of exponentially decaying integrands
  (:func:`integrate_semi_infinite`),
* conditionally convergent oscillatory integrals, computed at a finite
  regulator e^{-eps*u} and extrapolated eps -> 0 by a Richardson/Neville
  ladder (:func:`integrate_oscillatory_regulated`,
  :func:`extrapolate_regulator`, :func:`oscillatory_limit`),
* central-difference derivatives with Richardson refinement
  (:func:`derivative_n`).

All integrators run on a vectorized composite Gauss-Legendre rule: the
interval is cut into segments sized to the local oscillation, every segment
is evaluated in one numpy batch with an embedded 8/16-point error estimate,
and segments that miss their share of the tolerance are bisected until the
evaluation budget runs out.  Integrands must therefore accept numpy arrays;
plain scalar callables are wrapped transparently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import DEFAULT_TOLERANCES, DomainError, Tolerances

_X8, _W8 = np.polynomial.legendre.leggauss(8)
_X16, _W16 = np.polynomial.legendre.leggauss(16)


class ConvergenceError(RuntimeError):
    """Raised when an integral fails to meet its tolerance within the
    evaluation budget.  Carries the best value obtained so far."""

    def __init__(self, message, value=None, error_estimate=None, evaluations=0):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations


@dataclass(frozen=True)
class IntegrationResult:
    value: complex
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0.0:
            raise DomainError("error_estimate must be non-negative")
        if self.evaluations <= 0:
            raise DomainError("evaluations must be positive")


@dataclass(frozen=True)
class RegulatorLimit:
    """Extrapolated eps -> 0 value of a regulated integral."""

    value: complex
    error_estimate: float


def _vectorize(f, at=(0.25, 0.75)):
    """Return a callable guaranteed to map ndarray -> ndarray, probing f at
    in-domain points `at`."""
    probe = np.asarray(at, dtype=float)
    try:
        out = np.asarray(f(probe))
        if out.shape == probe.shape:
            return f
    except Exception:
        pass
    return np.vectorize(f, otypes=[complex])


def _segment_sums(f, edges):
    """Integrate f over each [edges[i], edges[i+1]] with GL16, returning
    per-segment values, |GL16-GL8| error estimates, and the evaluation count."""
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x16 = mid[:, None] + half[:, None] * _X16[None, :]
    v16 = np.sum(np.asarray(f(x16)) * _W16[None, :], axis=1) * half
    x8 = mid[:, None] + half[:, None] * _X8[None, :]
    v8 = np.sum(np.asarray(f(x8)) * _W8[None, :], axis=1) * half
    return v16, np.abs(v16 - v8), 24 * len(mid)


def _adaptive_segments(f, edges, abs_tol, budget):
    """Sum segment integrals, bisecting the worst offenders until the total
    embedded error estimate is below abs_tol or the budget is exhausted.

    Returns (value, error_estimate, evaluations, converged).
    """
    edges = np.asarray(edges, dtype=float)
    values, errors, evals = _segment_sums(f, edges)
    segs = list(zip(edges[:-1], edges[1:], values, errors))
    total_evals = evals
    for _ in range(64):
        total_err = sum(s[3] for s in segs)
        if total_err <= abs_tol:
            break
        if total_evals >= budget:
            value = sum(s[2] for s in segs)
            return value, total_err, total_evals, False
        segs.sort(key=lambda s: s[3], reverse=True)
        n_split = max(1, min(len(segs) // 4 + 1, 512))
        worst, keep = segs[:n_split], segs[n_split:]
        pairs = []
        for a, b, _, _ in worst:
            m = 0.5 * (a + b)
            pairs.append((a, m))
            pairs.append((m, b))
        pe = np.array(pairs)
        mid = 0.5 * (pe[:, 0] + pe[:, 1])
        half = 0.5 * (pe[:, 1] - pe[:, 0])
        x16 = mid[:, None] + half[:, None] * _X16[None, :]
        v16 = np.sum(np.asarray(f(x16)) * _W16[None, :], axis=1) * half
        x8 = mid[:, None] + half[:, None] * _X8[None, :]
        v8 = np.sum(np.asarray(f(x8)) * _W8[None, :], axis=1) * half
        total_evals += 24 * len(pe)
        segs = keep + [(pe[i, 0], pe[i, 1], v16[i], abs(v16[i] - v8[i])) for i in range(len(pe))]
    value = sum(s[2] for s in segs)
    total_err = sum(s[3] for s in segs)
    return value, total_err, total_evals, total_err <= abs_tol


def integrate_semi_infinite(
    f: Callable,
    decay_rate: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
    lower: float = 0.0,
) -> IntegrationResult:
    """Integrate f over [lower, inf) assuming |f| decays at least like
    exp(-decay_rate * u) beyond a few decay lengths.

    The axis is covered by geometrically growing windows, each handled by the
    adaptive segment engine; iteration stops when two consecutive windows
    contribute below tolerance, with the neglected tail folded into the error
    estimate.
    """
    if not (decay_rate > 0.0):
        raise DomainError(f"decay_rate must be positive, got {decay_rate}")
    scale = 1.0 / decay_rate
    fv = _vectorize(f, at=(lower + 0.25 * scale, lower + 0.75 * scale))
    total = 0.0 + 0.0j
    total_err = 0.0
    evals = 0
    a = float(lower)
    width = 8.0 * scale
    small_streak = 0
    for window in range(40):
        b = a + width
        n_seg = 8
        edges = np.linspace(a, b, n_seg + 1)
        target = max(tol.abs_tol, tol.rel_tol * max(abs(total), 1e-300)) / 4.0
        value, err, used, ok = _adaptive_segments(fv, edges, target, tol.max_evaluations - evals)
        total += value
        total_err += err
        evals += used
        if evals >= tol.max_evaluations:
            raise ConvergenceError(
                "evaluation budget exhausted in integrate_semi_infinite",
                value=total, error_estimate=total_err, evaluations=evals)
        threshold = max(tol.abs_tol, tol.rel_tol * abs(total))
        if abs(value) < 0.25 * threshold:
            small_streak += 1
            if small_streak >= 2:
                total_err += abs(value)  # geometric tail bound, ratio < 1/2 by decay assumption
                return IntegrationResult(total, total_err, evals)
        else:
            small_streak = 0
        a = b
        width *= 2.0
    raise ConvergenceError(
        "integrand did not decay within the window budget; check decay_rate",
        value=total, error_estimate=total_err, evaluations=evals)


def _march_edges(lower, upper, base_freq, extra_phase_rate, max_chunks):
    """Chunk [lower, upper] so that every chunk spans about pi of local phase."""
    if extra_phase_rate is None:
        n = int(math.ceil((upper - lower) * base_freq / math.pi)) + 1
        n = min(n, max_chunks)
        return np.linspace(lower, upper, n + 1)
    edges = [lower]
    u = lower
    while u < upper and len(edges) <= max_chunks:
        u += math.pi / (base_freq + abs(extra_phase_rate(u)))
        edges.append(min(u, upper))
    return np.array(edges)


def integrate_oscillatory_regulated(
    f: Callable,
    phase_rate: float,
    epsilon: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
    lower: float = 0.0,
    extra_phase_rate: Callable[[float], float] | None = None,
) -> IntegrationResult:
    """Compute int_lower^inf f(u) exp((i*phase_rate - epsilon) u) du.

    f must be bounded (or at most polynomially growing); the exponential
    regulator makes the integral absolutely convergent and the caller removes
    it afterwards with :func:`extrapolate_regulator`.  extra_phase_rate, when
    given, reports additional local oscillation of f itself (for example b/u
    for f = u^{-ib}) so chunks can track the full phase.
    """
    if not (epsilon > 0.0):
        raise DomainError(f"regulator epsilon must be positive, got {epsilon}")
    if phase_rate == 0.0:
        raise DomainError("phase_rate must be nonzero")
    freq = abs(phase_rate) + epsilon
    fv = _vectorize(f, at=(lower + 0.25 / freq, lower + 0.75 / freq))
    weight = lambda u: fv(u) * np.exp((1j * phase_rate - epsilon) * u)

    total = 0.0 + 0.0j
    total_err = 0.0
    evals = 0
    a = float(lower)
    # march in blocks; stop once the remaining envelope is provably below tolerance
    span = max(6.0 * math.pi / freq, 1.0 / epsilon)
    for block in range(4000):
        b = a + span
        edges = _march_edges(a, b, freq, extra_phase_rate, max_chunks=200_000)
        values, errors, used = _segment_sums(weight, edges)
        total += values.sum()
        total_err += errors.sum()
        evals += used
        if evals >= tol.max_evaluations:
            raise ConvergenceError(
                "evaluation budget exhausted in integrate_oscillatory_regulated",
                value=total, error_estimate=total_err, evaluations=evals)
        b = float(edges[-1])  # marching may stop short of the block end
        # envelope bound on the neglected tail: sup|f| near b times the
        # remaining exponential mass, with one extra factor for slow growth
        amp = float(np.max(np.abs(np.asarray(fv(np.array([b - 0.251 * span, b - 0.013 * span, b]))))))
        tail_bound = 2.0 * amp * math.exp(-epsilon * (b - lower)) / epsilon
        threshold = max(tol.abs_tol, tol.rel_tol * abs(total))
        if tail_bound < 0.5 * threshold:
            total_err += tail_bound
            return IntegrationResult(total, total_err, evals)
        a = b
    raise ConvergenceError(
        "oscillatory integral failed to settle; epsilon may be too small",
        value=total, error_estimate=total_err, evaluations=evals)


def regulator_ladder(epsilon0: float, levels: int) -> tuple[float, ...]:
    """Halving ladder epsilon0, epsilon0/2, ..., with `levels` entries."""
    if levels < 2:
        raise DomainError("need at least 2 ladder levels")
    return tuple(epsilon0 * 0.5 ** j for j in range(levels))


def extrapolate_regulator(samples: Sequence[tuple[float, complex]]) -> RegulatorLimit:
    """Neville extrapolation of (epsilon, value) samples to epsilon = 0.

    Requires at least two samples with strictly decreasing epsilon.  The error
    estimate is the difference between the extrapolants with and without the
    coarsest sample, a conservative proxy for the neglected orders.
    """
    if len(samples) < 2:
        raise DomainError("extrapolate_regulator needs at least 2 samples")
    eps = [float(e) for e, _ in samples]
    vals = [complex(v) for _, v in samples]
    if any(not (eps[i] > eps[i + 1] > 0.0) for i in range(len(eps) - 1)):
        raise DomainError("epsilon samples must be strictly decreasing and positive")

    def neville(xs, ys):
        tab = list(ys)
        n = len(tab)
        for lev in range(1, n):
            for i in range(n - lev):
                tab[i] = (xs[i + lev] * tab[i] - xs[i] * tab[i + 1]) / (xs[i + lev] - xs[i])
        return tab[0]

    full = neville(eps, vals)
    trimmed = neville(eps[1:], vals[1:]) if len(eps) > 2 else vals[-1]
    return RegulatorLimit(full, abs(full - trimmed))


def oscillatory_limit(
    f: Callable,
    phase_rate: float,
    tol: Tolerances = DEFAULT_TOLERANCES,
    lower: float = 0.0,
    extra_phase_rate: Callable[[float], float] | None = None,
    epsilon0: float | None = None,
    levels: int | None = None,
) -> RegulatorLimit:
    """Regulate, ladder, and extrapolate in one call.

    The ladder seed defaults to tol.epsilon_regulator scaled by |phase_rate|
    so the regulator is always small compared to one oscillation.
    """
    eps0 = epsilon0 if epsilon0 is not None else tol.epsilon_regulator * abs(phase_rate)
    ladder = regulator_ladder(eps0, levels if levels is not None else tol.richardson_levels)
    samples = []
    quad_err = 0.0
    for eps in ladder:
        res = integrate_oscillatory_regulated(
            f, phase_rate, eps, tol=tol, lower=lower, extra_phase_rate=extra_phase_rate)
        samples.append((eps, res.value))
        quad_err += res.error_estimate
    limit = extrapolate_regulator(samples)
    return RegulatorLimit(limit.value, limit.error_estimate + quad_err)


_STENCILS = {
    1: ([-1.0, 1.0], [-0.5, 0.5]),
    2: ([-1.0, 0.0, 1.0], [1.0, -2.0, 1.0]),
    3: ([-2.0, -1.0, 1.0, 2.0], [-0.5, 1.0, -1.0, 0.5]),
}


def derivative_n(f: Callable[[float], float], x: float, n: int, h: float = 0.05,
                 levels: int = 5) -> float:
    """n-th derivative (n in {1,2,3}) by central differences with Richardson
    refinement over step halvings.  Relative accuracy ~1e-6 or better for
    smooth functions with an O(1) scale of variation."""
    if n not in _STENCILS:
        raise DomainError(f"derivative order must be 1, 2 or 3, got {n}")
    if not (h > 0.0):
        raise DomainError(f"step h must be positive, got {h}")
    offsets, weights = _STENCILS[n]

    def central(step):
        return sum(w * f(x + o * step) for o, w in zip(offsets, weights)) / step ** n

    # Richardson in h^2: columns eliminate successive even error orders
    table = [central(h * 0.5 ** j) for j in range(levels)]
    for lev in range(1, levels):
        factor = 4.0 ** lev
        table = [
            (factor * table[i + 1] - table[i]) / (factor - 1.0)
            for i in range(len(table) - 1)
        ]
    return table[0]
