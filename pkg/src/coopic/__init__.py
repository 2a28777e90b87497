"""Bounds and schemes for the two-user Gaussian interference channel with conferencing decoders."""

from .channel import (
    ChannelGains,
    ComplexGain,
    CovarianceModel,
    DegenerateModelError,
    SymmetricParams,
    build_covariance,
    gains_from_symmetric,
    gaussian_mi,
)
from .gdof import GdofPoint, gdof_curve, gdof_formula, gdof_numeric
from .rates import (
    PowerSplit,
    QuantizerConfig,
    RateBreakdown,
    achievable_sym_rate,
    etw_power_split,
    gap,
    max_symmetric_rate_t1,
    outer_bound_sym,
    quantization_distortion,
    theorem1_region,
    xi,
)

__version__ = "0.1.0"
