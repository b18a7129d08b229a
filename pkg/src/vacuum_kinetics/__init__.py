"""Casimir-Polder atom-wall forces for stationary and slowly moving atoms,
and the accelerated-detector toolbox (worldlines, noise/dissipation kernels,
cavity transition coefficients, photon master equation)."""

from .core import (
    NATURAL,
    AtomSpec,
    DomainError,
    Tolerances,
    UnitSystem,
    from_dimensionless,
    to_dimensionless,
    unruh_temperature,
)
from .quadrature import (
    ConvergenceError,
    IntegrationResult,
    RegulatorLimit,
    derivative_n,
    extrapolate_regulator,
    integrate_oscillatory_regulated,
    integrate_semi_infinite,
    oscillatory_limit,
)
from .trajectory import (
    AcceleratedTrajectory,
    InertialTrajectory,
    doppler_frequency,
    position,
    redshifted_mode_phase,
    smear,
)
from .casimir_polder import (
    ForceResult,
    WallScenario,
    asymptote_far,
    asymptote_near,
    dressing_shift,
    dressing_shift_bracket,
    dressing_shift_force,
    electrostatic_force,
    moving_force,
    moving_potential,
    stationary_force,
    stationary_potential,
    transient_force,
)
from .detector_kernels import (
    KernelSample,
    KernelSpec,
    dissipation_equivalence_check,
    dissipation_kernel,
    extrapolated_kernels,
    noise_kernel,
    smeared_kernel,
    thermal_inertial_noise,
    two_point_derivative,
)
from .cavity_scheme import (
    CavitySpec,
    OnResonanceError,
    TransitionRates,
    amplitude_I1,
    amplitude_I2,
    emission_rate_sudden,
    rates,
    ratio_adiabatic,
    ratio_constant_velocity,
    ratio_sudden_asymptotic,
)
from .master_equation import (
    PhotonDistribution,
    cavity_temperature,
    drift,
    evolve,
    steady_state,
)

__version__ = "0.1.0"

__all__ = [
    "NATURAL", "AtomSpec", "DomainError", "Tolerances", "UnitSystem",
    "from_dimensionless", "to_dimensionless", "unruh_temperature",
    "ConvergenceError", "IntegrationResult", "RegulatorLimit", "derivative_n",
    "extrapolate_regulator", "integrate_oscillatory_regulated",
    "integrate_semi_infinite", "oscillatory_limit",
    "AcceleratedTrajectory", "InertialTrajectory", "doppler_frequency",
    "position", "redshifted_mode_phase", "smear",
    "ForceResult", "WallScenario", "asymptote_far", "asymptote_near",
    "dressing_shift", "dressing_shift_bracket", "dressing_shift_force",
    "electrostatic_force", "moving_force", "moving_potential",
    "stationary_force", "stationary_potential", "transient_force",
    "KernelSample", "KernelSpec", "dissipation_equivalence_check",
    "dissipation_kernel", "extrapolated_kernels", "noise_kernel",
    "smeared_kernel", "thermal_inertial_noise", "two_point_derivative",
    "CavitySpec", "OnResonanceError", "TransitionRates", "amplitude_I1",
    "amplitude_I2", "emission_rate_sudden", "rates", "ratio_adiabatic",
    "ratio_constant_velocity", "ratio_sudden_asymptotic",
    "PhotonDistribution", "cavity_temperature", "drift", "evolve",
    "steady_state",
    "__version__",
]
