"""Equivalent-circuit modeling of piezoelectric readout chains.

The package models a receive chain end to end: a thickness-mode
piezoelectric plate with matching and backing layers, a coaxial cable, and
the receiving electronics.  It exposes single-frequency and full-band
transfer functions, thermal/amplifier noise budgets, radial-resonance
estimates, and parameter sweeps over element area, cable length, and
receiver impedance.
"""

from .errors import (
    BandUnboundedError,
    ConfigError,
    DegenerateFitError,
    InfiniteSnrError,
    InvalidParameterError,
    ModelError,
    SingularFrequencyError,
)
from .types import (
    AmpNoise,
    CableSpec,
    FrequencyGrid,
    ImpedanceTable,
    PassiveLayer,
    PiezoPlate,
    PlateConstants,
    ReadoutChain,
    ReceiverSpec,
    Spectrum,
    derived_constants,
)
from .twoport import TwoPort, cascade, series, shunt, tline, transformer
from .klm import (
    KlmParams,
    back_branch_impedance,
    chain_factors,
    chain_matrix,
    circuit_three_port_response,
    dynamic_reactance,
    guard_grid,
    open_circuit_input_impedance,
    series_impedance,
    short_circuit_input_impedance,
    short_circuit_reference,
    singular_frequencies,
    three_port_impedance,
    turns_ratio,
)
from .transfer import H1Inputs, electrical_input_impedance, h1, h2, open_circuit_gain
from .response import (
    BandMetrics,
    Waveform,
    band_metrics,
    chain_impulse_response,
    frequency_response,
    impulse_response,
)
from .noise import (
    BOLTZMANN,
    DEFAULT_TEMPERATURE,
    Excitation,
    NoiseBudget,
    node_noise_terms,
    noise_psd,
    snr,
)
from .resonance import (
    InverseDiameterFit,
    RadialMode,
    RadialModeSet,
    bessel_j0_roots,
    fit_inverse_diameter,
    jittered_fit_points,
    lowest_resonance,
    radial_modes,
)
from .sweep import (
    AXIS_ORDER,
    METRICS,
    SweepResult,
    normalize,
    optimal_cable_length,
    sweep_grid,
)
from .checks import IdentityCheck, run_identity_checks
from .config import LoadedConfig, load_config

__version__ = "0.1.0"

__all__ = [
    "AXIS_ORDER",
    "AmpNoise",
    "BOLTZMANN",
    "BandMetrics",
    "BandUnboundedError",
    "CableSpec",
    "ConfigError",
    "DEFAULT_TEMPERATURE",
    "DegenerateFitError",
    "Excitation",
    "FrequencyGrid",
    "H1Inputs",
    "IdentityCheck",
    "ImpedanceTable",
    "InfiniteSnrError",
    "InvalidParameterError",
    "InverseDiameterFit",
    "KlmParams",
    "LoadedConfig",
    "METRICS",
    "ModelError",
    "NoiseBudget",
    "PassiveLayer",
    "PiezoPlate",
    "PlateConstants",
    "RadialMode",
    "RadialModeSet",
    "ReadoutChain",
    "ReceiverSpec",
    "SingularFrequencyError",
    "Spectrum",
    "SweepResult",
    "TwoPort",
    "Waveform",
    "back_branch_impedance",
    "band_metrics",
    "bessel_j0_roots",
    "cascade",
    "chain_factors",
    "chain_impulse_response",
    "chain_matrix",
    "circuit_three_port_response",
    "derived_constants",
    "dynamic_reactance",
    "electrical_input_impedance",
    "fit_inverse_diameter",
    "frequency_response",
    "guard_grid",
    "h1",
    "h2",
    "impulse_response",
    "jittered_fit_points",
    "load_config",
    "lowest_resonance",
    "node_noise_terms",
    "noise_psd",
    "normalize",
    "open_circuit_gain",
    "open_circuit_input_impedance",
    "optimal_cable_length",
    "radial_modes",
    "run_identity_checks",
    "series",
    "series_impedance",
    "short_circuit_input_impedance",
    "short_circuit_reference",
    "shunt",
    "singular_frequencies",
    "snr",
    "sweep_grid",
    "three_port_impedance",
    "tline",
    "transformer",
    "turns_ratio",
    "__version__",
]
