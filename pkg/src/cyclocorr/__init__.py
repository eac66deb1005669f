"""Streaming cyclic (conjugate) cross-correlation analysis.

The core object is :class:`~cyclocorr.estimator.CyclicCorrelator`, which turns
two synchronized complex sample streams into per-window estimates of the
cyclic correlation (``conj=False``) or conjugate cyclic correlation
(``conj=True``).  :mod:`cyclocorr.siggen` builds CPM/GMSK test signals,
:mod:`cyclocorr.impair` models carrier frequency offset and noise, and
:mod:`cyclocorr.reference` holds slow independent oracles.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    CyclicFrame,
    EstimatorConfig,
    FullLayout,
    LagSpec,
    Mode,
    SetLayout,
    flat_index,
    full_bin_to_alpha,
    validate_config,
)
from .errors import (  # noqa: E402
    ConfigError,
    CyclocorrError,
    DataError,
    FormatError,
    NoFeatureError,
    UsageError,
)
from .estimator import CyclicCorrelator, average_frames, create  # noqa: E402

__all__ = [
    "ConfigError",
    "CyclicCorrelator",
    "CyclicFrame",
    "CyclocorrError",
    "DataError",
    "EstimatorConfig",
    "FormatError",
    "FullLayout",
    "LagSpec",
    "Mode",
    "NoFeatureError",
    "SetLayout",
    "UsageError",
    "average_frames",
    "create",
    "flat_index",
    "full_bin_to_alpha",
    "validate_config",
]
