"""Teleportation of quantum Fisher information through noisy channels with memory.

Closed-form QFI expressions for amplitude-damping, phase-damping and
depolarizing memory channels, checked against a brute-force density-matrix
pipeline (Kraus channel -> Bell-diagonal teleportation -> spectral QFI).
"""

from qfi_teleport.analytic import (
    ChannelCoefficients,
    ThresholdResult,
    ad_min_location,
    ad_threshold,
    channel_coefficients,
    closed_form_qfi,
    de_optimal_location,
    pd_threshold,
)
from qfi_teleport.channels import (
    ChannelConfig,
    ChannelKind,
    KrausSet,
    apply_memory_channel,
    kraus_correlated,
    kraus_uncorrelated,
    verify_cptp,
)
from qfi_teleport.qfi import (
    Param,
    ParamFamily,
    QfiResult,
    qfi_bloch,
    qfi_spectral,
    qfi_teleported,
    teleported_family_double,
    teleported_family_single,
)
from qfi_teleport.qmath import SpectralDecomposition, eigh, tensor, validate_density
from qfi_teleport.qstate import (
    BlochVector,
    ProbeParams,
    ResourceParams,
    bloch_from_density,
    probe_double,
    probe_single,
    x_state,
)
from qfi_teleport.teleport import bell_probabilities, teleport_double, teleport_single

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "ChannelCoefficients",
    "ChannelConfig",
    "ChannelKind",
    "KrausSet",
    "Param",
    "ParamFamily",
    "ProbeParams",
    "QfiResult",
    "ResourceParams",
    "SpectralDecomposition",
    "ThresholdResult",
    "ad_min_location",
    "ad_threshold",
    "apply_memory_channel",
    "bell_probabilities",
    "bloch_from_density",
    "channel_coefficients",
    "closed_form_qfi",
    "de_optimal_location",
    "eigh",
    "kraus_correlated",
    "kraus_uncorrelated",
    "pd_threshold",
    "probe_double",
    "probe_single",
    "qfi_bloch",
    "qfi_spectral",
    "qfi_teleported",
    "teleport_double",
    "teleport_single",
    "teleported_family_double",
    "teleported_family_single",
    "tensor",
    "validate_density",
    "verify_cptp",
    "x_state",
]
