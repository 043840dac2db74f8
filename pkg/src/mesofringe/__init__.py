"""mesofringe: double-slit interference of mesoscopic particles.

Fringe patterns of a free double-Gaussian beam, which-path coherence
criteria, emission-induced decoherence with the closed-form visibility law,
the memory-kernel decay problem and its Markov limit, and blackbody-recoil
decoherence temperature bounds.  The CLI (``mesofringe``) emits every
pattern, surface and sweep as CSV or JSON tables.
"""

from .foundation import (
    CONSTANTS,
    IntegrationError,
    PhysicalConstants,
    integrate,
    principal_value_integrate,
    sinc,
)
from .wavepacket import GaussianPacket1D, free_evolve, position_density, spatial_spread
from .doubleslit import (
    BeamParams,
    Experiment,
    Pattern,
    SlitGeometry,
    exact_intensity,
    far_field_intensity,
    fringe_period,
    normalization_N,
    recoiled_intensity,
)
from .microscope import (
    CoherenceVerdict,
    MicroscopeSetup,
    coherence_condition,
    fringe_halfspacing,
    momentum_kick,
    pattern_shake,
)
from .emission import (
    ConvergenceError,
    DecayAmplitudeSeries,
    FormFactor,
    TwoLevelEmitter,
    beta_weight,
    decay_rate,
    dipole_for_rate,
    emission_probability,
    emission_probability_quadrature,
    lamb_shift,
    markov_amplitude,
    memory_kernel,
    solve_nonmarkov,
)
from .visibility import (
    DecoherenceScenario,
    ResolutionError,
    VisibilitySurface,
    decohered_intensity_approx,
    decohered_intensity_exact,
    decohered_pattern,
    exact_angular_average,
    extract_visibility,
    visibility_closed,
    visibility_surface,
)
from .thermal import (
    DEFAULT_EMISSIVITY,
    FRAGMENTATION_TEMPERATURE,
    CoherenceCheck,
    RecoilBudget,
    ThermalSource,
    blackbody_intensity,
    blackbody_photon_flux,
    coherence_ok,
    decoherence_temperature,
    emitted_budget,
    kappa_constant,
    tdec_vs_separation_sweep,
    xi_constant,
)
from .presets import experiment_preset
from .kernels import backend as kernel_backend

__version__ = "0.1.0"
