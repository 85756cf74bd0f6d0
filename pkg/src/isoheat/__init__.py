"""Heat traces, heat contents and isospectral comparisons for explicit planar domains
and 1-D Schroedinger operators."""

from .errors import *  # noqa: F401,F403
from .fractal import SelfSimilarBand, band_heat_content, band_heat_trace, log_coefficients, renewal_remainder
from .geometry import (
    BC,
    Rectangle,
    RightIsoTriangle,
    Scaled,
    Union,
    components,
    corner_coefficient,
    polygon_invariants,
    scale,
    union,
    vertex_term,
)
from .heatfun import (
    HeatValue,
    content_asymptotic,
    fit_small_time,
    heat_content,
    heat_trace,
    large_time_leading,
    trace_asymptotic,
)
from .spectra import ModeStream, enumerate_modes, first_eigenvalues, isospectral_check

__version__ = "0.1.0"
