"""Entanglement harvesting with localized field modes.

Library for the leading-order joint state and negativity of two localized
probe-field modes coupled to a free scalar vacuum, the mixedness of localized
field modes, and a nonperturbative Gaussian lattice oracle validating the
perturbative pipeline.
"""

from .errors import (
    ConfigError,
    GapMismatchError,
    InconsistentInputError,
    InvalidModeError,
    KindMismatchError,
    ModeHarvestError,
    StepSizeError,
    SwitchingMismatchError,
    ToleranceError,
    TruncationFailureError,
    UnstablePotentialError,
    UnsupportedModeError,
    UnsupportedOrderError,
)
from .modes import (
    BOX,
    HARMONIC,
    PotentialSpec,
    box_frequency,
    harmonic_frequency,
    hermite_eval,
    mode_frequency,
    mode_overlap,
    mode_spatial_profile,
)
from .smearing import (
    DetectorSpec,
    SwitchingSpec,
    spatial_fourier,
    switching_fourier_sq,
    switching_value,
)
from .kernels import (
    QuadratureSettings,
    TargetFieldSpec,
    feynman_time_kernel,
    feynman_time_kernel_fast,
    local_time_kernel,
    omega_k,
    symmetric_time_kernel,
)
from .harvesting import (
    CommunicationEstimate,
    HarvestingResult,
    assemble_rho,
    communication_estimate,
    compute_K,
    compute_L,
    compute_M,
    gap_sweep,
    harvest_pair,
    negativity_closed,
    negativity_from_rho,
    validate_pair_state,
)
from .purity import (
    PurityResult,
    PuritySpec,
    f_weight,
    overlap_coeff_sq,
    purity_interval,
    squeezing_parameter,
    symplectic_eigenvalue,
)
from .oracle import (
    single_mode_truncation,
    CovarianceState,
    LatticeModel,
    LatticeProbe,
    ProbeChain,
    evolve_covariance,
    gaussian_negativity,
    lattice_model_from_json,
    normal_modes,
    perturbative_prediction,
    residual_scaling,
    simulate_pair,
)

__version__ = "0.1.0"
