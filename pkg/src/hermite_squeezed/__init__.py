"""Nonclassicality of Hermite-polynomial-excited squeezed vacuum states.

The library evaluates, in closed form, the photon statistics (Mandel Q, g2,
photon-number distribution), quadrature properties, Wigner function and its
negative volume of states H_n(mu a + nu a^dag) S(r)|0>, plus their evolution
in a phase-sensitive reservoir -- each cross-validated against an independent
truncated-Fock-space oracle.
"""

from .errors import (
    CutoffTooSmall,
    DegenerateDenominator,
    HermiteSqueezedError,
    NearSingularD,
    NonConvergence,
    NonPositiveNorm,
    TraceDrift,
    UnphysicalReservoir,
    UnsupportedMoment,
    ZeroMeanPhoton,
)
from .measures import (
    PndResult,
    default_m_max,
    g2,
    mandel_q,
    pnd,
    pnd_diagonal,
    quadrature_dist,
    quadrature_norm_report,
    squeezing_degree,
)
from .phasespace import PhaseGrid, WignerField
from .reservoir import (
    EvolvedWignerTerms,
    ReservoirParams,
    critical_time,
    evolved_negative_volume,
    evolved_wigner_grid,
    evolved_wigner_point,
    sigma_infinity,
)
from .specfun import f_coeff, hermite, legendre, scaled_legendre
from .state import (
    StateParams,
    TransformedParams,
    moment_state,
    moment_vacuum,
    normalization_inv_sq,
    transform_params,
)
from .wigner import (
    default_half_width,
    negative_volume,
    optimize_delta,
    wigner_grid,
    wigner_point,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CutoffTooSmall",
    "DegenerateDenominator",
    "HermiteSqueezedError",
    "NearSingularD",
    "NonConvergence",
    "NonPositiveNorm",
    "TraceDrift",
    "UnphysicalReservoir",
    "UnsupportedMoment",
    "ZeroMeanPhoton",
    "PndResult",
    "default_m_max",
    "g2",
    "mandel_q",
    "pnd",
    "pnd_diagonal",
    "quadrature_dist",
    "quadrature_norm_report",
    "squeezing_degree",
    "PhaseGrid",
    "WignerField",
    "EvolvedWignerTerms",
    "ReservoirParams",
    "critical_time",
    "evolved_negative_volume",
    "evolved_wigner_grid",
    "evolved_wigner_point",
    "sigma_infinity",
    "f_coeff",
    "hermite",
    "legendre",
    "scaled_legendre",
    "StateParams",
    "TransformedParams",
    "moment_state",
    "moment_vacuum",
    "normalization_inv_sq",
    "transform_params",
    "default_half_width",
    "negative_volume",
    "optimize_delta",
    "wigner_grid",
    "wigner_point",
]
