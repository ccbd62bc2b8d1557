"""MIMO wiretap simulator: artificial-noise transmission under imperfect CSI."""

from ._core import (
    ConfigError,
    ValidityRangeError,
    WiretapError,
    compute_moments,
    design_artificial_noise,
    evaluate_perfect_csi,
    from_db,
    generate_channels,
    library_version,
    partition_svd,
    predict_naive_sinr,
    preset,
    run,
    secrecy_capacity_proxy,
    to_db,
    validate,
)

__version__ = library_version()

__all__ = [
    "ConfigError",
    "ValidityRangeError",
    "WiretapError",
    "compute_moments",
    "design_artificial_noise",
    "evaluate_perfect_csi",
    "from_db",
    "generate_channels",
    "library_version",
    "partition_svd",
    "predict_naive_sinr",
    "preset",
    "run",
    "secrecy_capacity_proxy",
    "to_db",
    "validate",
]
