"""Bounds, oracle checks, and a receiver model for reading a
binary-reflectivity optical memory with classical or entangled light."""

from .bounds import (
    BandwidthSearch,
    BoundReport,
    MemorySpec,
    TransmitterSpec,
    binary_entropy,
    bound_report,
    classical_bound,
    classical_bound_decoherent,
    ecc_overhead,
    epr_qcb,
    find_min_bandwidth,
    info_gain,
    qcb_infinite_bandwidth,
    threshold_energy,
)
from .gaussian import (
    BosonicChannel,
    GaussianState,
    NumericalError,
    SymplecticSpectrum,
    add_noise,
    apply_channel,
    coherent_state,
    gaussian_fidelity_1mode,
    gaussian_overlap,
    pure_loss,
    qcb,
    qcb_overlap_t,
    symplectic_eigenvalues,
    thermal_loss,
    tmsv_state,
    vacuum_state,
)
from .receiver import (
    EprVariancePair,
    ReceiverConfig,
    bell_error_prob,
    chi2_cdf,
    chi2_quantile,
    epr_variance,
    mc_error_prob,
    optimize_bell_gain,
)

__version__ = "0.1.0"
