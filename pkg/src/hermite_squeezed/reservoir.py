"""Evolution of the Wigner function in a phase-sensitive reservoir.

The bath is characterized by the thermal occupation nbar and the complex
correlation M with |M|^2 <= nbar (nbar + 1) (equality: ideally squeezed
reservoir; M = 0: thermal bath; M = nbar = 0: pure loss).  Time enters only
through the dimensionless product kappa t.  The evolved Wigner function is the
closed-form product W(alpha, t) = W_r(alpha, t) F_n(alpha, t): a Gaussian
factor W_r carrying the reservoir convolution, and a non-Gaussian polynomial
factor F_n from the Hermite excitation.  The scaled-Hermite combinations in
F_n are evaluated the same branch-free way as in the static module.

The building blocks, with T = 1 - e^(-2 kappa t) and
mu_inf = 1 / sqrt((2 nbar + 1)^2 - 4 |M|^2):

    R1 = (1 + 2 nbar) mu_inf^2 e^(-2 kappa t) + T cosh 2r
    R2 = mu_inf^2 ((1 + 2 nbar) conj(alpha) + 2 alpha conj(M)) e^(-kappa t)
    R3 = 2 mu_inf^2 conj(M) e^(-2 kappa t) + T sinh 2r
    D  = R1^2 - |R3|^2,

and for n = 1 the origin value is proportional to -G1, whose sign flips at the
critical time kappa t_c = ln(mu_inf + 1) / 2, independently of r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NearSingularD, NonConvergence, UnphysicalReservoir
from .phasespace import PhaseGrid, WignerField
from .specfun import exp_quadratic_deriv
from .state import StateParams
from .wigner import _abs_plane_integral, default_half_width

__all__ = [
    "ReservoirParams",
    "EvolvedWignerTerms",
    "sigma_infinity",
    "evolved_terms",
    "evolved_wigner_point",
    "evolved_wigner_samples",
    "evolved_wigner_grid",
    "evolved_negative_volume",
    "critical_time",
]

_IMAG_RESIDUE_TOL = 1e-8
_D_SINGULAR_TOL = 1e-13
_PHYSICALITY_SLACK = 1e-12


def _check_physical(nbar: float, m_corr: complex) -> None:
    if nbar < 0.0:
        raise UnphysicalReservoir("nbar must be non-negative")
    if abs(m_corr) ** 2 > nbar * (nbar + 1.0) + _PHYSICALITY_SLACK:
        raise UnphysicalReservoir(
            f"|M|^2 = {abs(m_corr) ** 2:.6g} exceeds nbar(nbar+1) = {nbar * (nbar + 1.0):.6g}"
        )


def _mu_inf(nbar: float, m_corr: complex) -> float:
    return 1.0 / math.sqrt((2.0 * nbar + 1.0) ** 2 - 4.0 * abs(m_corr) ** 2)


@dataclass(frozen=True)
class ReservoirParams:
    """Phase-sensitive bath (nbar, M) at dimensionless time kappa_t."""

    kappa_t: float
    nbar: float
    M: complex = 0j

    def __post_init__(self):
        if self.kappa_t < 0.0:
            raise ValueError("kappa_t must be non-negative")
        _check_physical(self.nbar, self.M)

    @property
    def mu_inf(self) -> float:
        """1 / sqrt((2 nbar + 1)^2 - 4 |M|^2), in (0, 1] for physical baths."""
        return _mu_inf(self.nbar, self.M)


def sigma_infinity(res: ReservoirParams) -> np.ndarray:
    """Steady-state kernel matrix ((conj M, nbar + 1/2), (nbar + 1/2, M))."""
    half = res.nbar + 0.5
    return np.array([[np.conj(res.M), half], [half, res.M]], dtype=complex)


@dataclass
class EvolvedWignerTerms:
    """Intermediate quantities of the evolved closed form at one phase point."""

    T: float
    mu_inf: float
    P: float
    D: float
    R1: float
    R2: complex
    R3: complex
    G1: float
    G2: complex
    G3: complex


def _core_terms(s: StateParams, res: ReservoirParams):
    """Scalar (alpha-independent) pieces shared by every phase point."""
    if res.kappa_t <= 0.0:
        raise ValueError("kappa_t must be positive; use wigner_point for t = 0")
    T = -math.expm1(-2.0 * res.kappa_t)
    e1 = math.exp(-res.kappa_t)
    e2 = math.exp(-2.0 * res.kappa_t)
    mu_inf = res.mu_inf
    ch2, sh2 = math.cosh(2.0 * s.r), math.sinh(2.0 * s.r)
    r1 = (1.0 + 2.0 * res.nbar) * mu_inf**2 * e2 + T * ch2
    r3 = 2.0 * mu_inf**2 * np.conj(res.M) + 0j
    r3 = r3 * e2 + T * sh2
    d = r1 * r1 - abs(r3) ** 2
    if abs(d) < _D_SINGULAR_TOL or d <= 0.0:
        raise NearSingularD(f"D = {d:.3g} outside the formula's regime")
    t = s.transformed
    g1 = 4.0 * t.nu1**2 * (1.0 + (T / d) * (2.0 * r3.real * sh2 - 2.0 * r1 * ch2))
    g2 = (2.0 * t.mu1 * t.nu1 - 1.0) + (2.0 * T * t.nu1**2 / d) * (
        2.0 * r1 * sh2 - ((r3 - np.conj(r3)) + 2.0 * r3.real * ch2)
    )
    return T, e1, mu_inf, r1, r3, d, g1, g2


def evolved_terms(s: StateParams, res: ReservoirParams, alpha: complex) -> EvolvedWignerTerms:
    """All closed-form intermediates (T, mu_inf, P, D, R_i, G_i) at one point."""
    T, e1, mu_inf, r1, r3, d, g1, g2 = _core_terms(s, res)
    a = complex(alpha)
    ch, sh = math.cosh(s.r), math.sinh(s.r)
    r2 = mu_inf**2 * ((1.0 + 2.0 * res.nbar) * np.conj(a) + 2.0 * a * np.conj(res.M)) * e1
    p_quad = (2.0 * mu_inf**2 / T) * (
        (2.0 * res.nbar + 1.0) * abs(a) ** 2 + (res.M * np.conj(a) ** 2).real * 2.0
    )
    t = s.transformed
    g3 = (4.0 * t.nu1 / d) * (
        r1 * (np.conj(r2) * sh + r2 * ch) - (np.conj(r2) * r3 * ch + np.conj(r3) * r2 * sh)
    )
    return EvolvedWignerTerms(
        T=T, mu_inf=mu_inf, P=p_quad, D=d, R1=r1, R2=complex(r2), R3=complex(r3),
        G1=float(g1), G2=complex(g2), G3=complex(g3),
    )


def evolved_wigner_samples(
    s: StateParams, res: ReservoirParams, alphas: np.ndarray
) -> tuple[np.ndarray, float]:
    """Vectorized evolved Wigner values W(alpha, t) = W_r F_n; (values, residue)."""
    T, e1, mu_inf, r1, r3, d, g1, g2 = _core_terms(s, res)
    t = s.transformed
    arr = np.asarray(alphas, dtype=complex)
    ch, sh = math.cosh(s.r), math.sinh(s.r)

    r2 = mu_inf**2 * ((1.0 + 2.0 * res.nbar) * np.conj(arr) + 2.0 * arr * np.conj(res.M)) * e1
    p_quad = (2.0 * mu_inf**2 / T) * (
        (2.0 * res.nbar + 1.0) * np.abs(arr) ** 2 + 2.0 * (res.M * np.conj(arr) ** 2).real
    )
    # exponents of the Gaussian factor are combined before exponentiation: for
    # small T both pieces diverge like 1/T and only the difference is finite
    cross = (
        2.0 * r1 * r2 * np.conj(r2) - r3 * np.conj(r2) ** 2 - np.conj(r3) * r2**2
    ) / (T * d)
    residue = float(np.max(np.abs(cross.imag))) if cross.size else 0.0
    w_gauss = (mu_inf / (math.pi * math.sqrt(d))) * np.exp(-p_quad + cross.real)

    g3 = (4.0 * t.nu1 / d) * (
        r1 * (np.conj(r2) * sh + r2 * ch) - (np.conj(r2) * r3 * ch + np.conj(r3) * r2 * sh)
    )
    total = np.zeros(arr.shape, dtype=complex)
    for l in range(s.n + 1):
        k = s.n - l
        coeff = (
            (-g1) ** l
            * math.factorial(s.n) ** 2
            / (math.factorial(l) * math.factorial(k) ** 2)
        )
        h_ket = exp_quadratic_deriv(k, g3, g2)
        h_bra = exp_quadratic_deriv(k, np.conj(g3), np.conj(g2))
        total = total + coeff * h_ket * h_bra
    f_poly = s.norm_sq * total
    residue = max(residue, float(np.max(np.abs(f_poly.imag))) if f_poly.size else 0.0)
    return w_gauss * f_poly.real, residue


def evolved_wigner_point(s: StateParams, res: ReservoirParams, alpha: complex) -> float:
    """Evolved Wigner value at a single phase point (kappa_t > 0)."""
    values, residue = evolved_wigner_samples(s, res, np.asarray(alpha, dtype=complex))
    assert residue < _IMAG_RESIDUE_TOL, f"imaginary residue {residue:.3g} in evolved Wigner"
    return float(values[()])


def evolved_wigner_grid(s: StateParams, res: ReservoirParams, grid: PhaseGrid) -> WignerField:
    """Evolved Wigner function on a grid, with reservoir metadata attached."""
    values, residue = evolved_wigner_samples(s, res, grid.alpha_mesh())
    assert residue < _IMAG_RESIDUE_TOL, f"imaginary residue {residue:.3g} in evolved grid"
    return WignerField(
        grid=grid,
        samples=values,
        max_imag_residue=residue,
        parameters={
            "n": s.n, "mu": s.mu, "nu": s.nu, "r": s.r,
            "kappa_t": res.kappa_t, "nbar": res.nbar,
            "M_re": res.M.real if isinstance(res.M, complex) else float(res.M),
            "M_im": res.M.imag if isinstance(res.M, complex) else 0.0,
        },
    )


def evolved_negative_volume(s: StateParams, res: ReservoirParams, tol: float) -> float:
    """Negative volume of the evolved Wigner function (same protocol as static)."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    def sampler(alphas: np.ndarray) -> np.ndarray:
        return evolved_wigner_samples(s, res, alphas)[0]

    base = default_half_width(s.n, s.r) * max(1.0, math.sqrt(2.0 * res.nbar + 1.0))
    total = _abs_plane_integral(sampler, base, tol)
    return 0.5 * (total - 1.0)


def critical_time(nbar: float, M: complex) -> float:
    """Negativity survival threshold kappa t_c = ln(mu_inf + 1) / 2 for n = 1.

    Bounded by ln((2 nbar + 2)/(2 nbar + 1))/2 <= t_c <= ln(2)/2 across the
    physical range of M; independent of the squeezing parameter r.
    """
    _check_physical(nbar, complex(M))
    return 0.5 * math.log1p(_mu_inf(nbar, complex(M)))
