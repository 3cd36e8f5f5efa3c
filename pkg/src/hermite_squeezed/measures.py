"""Closed-form nonclassicality measures of the excited squeezed vacuum.

Mandel Q and g2 come straight from the l + k <= 4 moments; the photon-number
distribution from coefficient extraction on the two-variable generating
function exp(-A1^2 t^2 - B1^2 a^2 + 2 C1 t a) with

    A1^2 = 1 + 2 mu^2 tanh r - 2 mu nu,
    B1^2 = tanh(r) / 2,
    C1   = nu - mu tanh r;

the p-quadrature density is the Hermite-Gaussian profile of the wave function,
and the squeezing degree is S = 2 (<a^dag a> - |<a^dag^2>|), negative values
in [-1, 0) certifying quadrature squeezing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, ZeroMeanPhoton
from .specfun import hermite, scaled_legendre, two_var_exp_deriv_scaled
from .state import StateParams, moment_state

__all__ = [
    "PndResult",
    "mandel_q",
    "g2",
    "pnd",
    "pnd_diagonal",
    "default_m_max",
    "quadrature_dist",
    "quadrature_norm_report",
    "squeezing_degree",
]

_MEAN_PHOTON_TOL = 1e-14
_DENOM_TOL = 1e-14
_IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class PndResult:
    """Photon-number probabilities P(m) for m = 0..m_max.

    Entries with m != n (mod 2) vanish identically (parity selection inherited
    from the even-photon squeezed vacuum under an order-n excitation).
    """

    probabilities: np.ndarray
    m_max: int


def mandel_q(p: StateParams) -> float:
    """Mandel Q = <a^dag^2 a^2> / <a^dag a> - <a^dag a>.

    Negative values certify sub-Poissonian statistics.  For the plain squeezed
    vacuum (n = 0) this equals cosh 2r.
    """
    nbar = moment_state(1, 1, p).real
    if nbar <= _MEAN_PHOTON_TOL:
        raise ZeroMeanPhoton("mean photon number vanishes (n = 0, r = 0 vacuum)")
    return moment_state(2, 2, p).real / nbar - nbar


def g2(p: StateParams) -> float:
    """Second-order correlation g2 = <a^dag^2 a^2> / <a^dag a>^2.

    For the plain squeezed vacuum this equals 3 + 1 / sinh^2 r.
    """
    nbar = moment_state(1, 1, p).real
    if nbar <= _MEAN_PHOTON_TOL:
        raise ZeroMeanPhoton("mean photon number vanishes (n = 0, r = 0 vacuum)")
    return moment_state(2, 2, p).real / nbar**2


def _pnd_coefficients(p: StateParams) -> tuple[float, float, float]:
    th = math.tanh(p.r)
    a1_sq = 1.0 + 2.0 * p.mu**2 * th - 2.0 * p.mu * p.nu
    b1_sq = th / 2.0
    c1 = p.nu - p.mu * th
    return a1_sq, b1_sq, c1


def default_m_max(p: StateParams) -> int:
    """Tail policy n + 8 ceil(e^(2|r|)) + 20 (tail decays like tanh^(2m) |r|)."""
    return p.n + 8 * math.ceil(math.exp(2.0 * abs(p.r))) + 20


def pnd(p: StateParams, m_max: int) -> PndResult:
    """Photon-number distribution P(m) for m = 0..m_max.

    P(m) = N^2 sech(r) (d^m/da^m d^n/dt^n exp(-A1^2 t^2 - B1^2 a^2 + 2 C1 t a))^2 / m!,
    extracted as a parity-constrained finite double sum.  Each entry is
    assembled in log magnitude so large m never overflows an intermediate.
    """
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    a1_sq, b1_sq, c1 = _pnd_coefficients(p)
    prefactor = p.norm_sq / math.cosh(p.r)
    probs = np.zeros(m_max + 1)
    for m in range(m_max + 1):
        if (m - p.n) % 2:
            continue
        mant, scale = two_var_exp_deriv_scaled(m, p.n, -b1_sq, -a1_sq, 2.0 * c1)
        if mant == 0.0:
            continue
        probs[m] = prefactor * mant * mant * math.exp(2.0 * scale - math.lgamma(m + 1.0))
    return PndResult(probabilities=probs, m_max=m_max)


def pnd_diagonal(p: StateParams) -> float:
    """P(m = n) through the scaled-Legendre route.

    P(n) = N^2 n! 2^(2n) sech(r) (D1^(n/2) P_n(C1 / sqrt(D1)))^2 with
    D1 = C1^2 - A1^2 B1^2, evaluated in real arithmetic so a negative D1 never
    touches a branch cut.
    """
    a1_sq, b1_sq, c1 = _pnd_coefficients(p)
    d1 = c1 * c1 - a1_sq * b1_sq
    core = scaled_legendre(p.n, c1, d1)
    return (
        p.norm_sq
        * math.factorial(p.n)
        * 4.0**p.n
        / math.cosh(p.r)
        * core
        * core
    )


def quadrature_dist(p: StateParams, p_value):
    """Probability density |Psi(p)|^2 of the p quadrature.

    |Psi(p)|^2 = N^2 / (sqrt(pi) u) e^(-p^2/u^2) |1 - 2 mu1 nu1 - 2 nu1^2|^n
                 |H_n(-i sqrt(2) nu1 (p/u) / sqrt(1 - 2 mu1 nu1 - 2 nu1^2))|^2,

    with u = e^r.  The Hermite argument is evaluated in complex arithmetic (it
    is real or purely imaginary depending on the sign of the square-root
    argument; the modulus squared is branch-independent).  Accepts a scalar or
    an ndarray of quadrature values.

    Raises
    ------
    DegenerateDenominator
        If |1 - 2 mu1 nu1 - 2 nu1^2| < 1e-14, where the printed form
        degenerates.
    """
    t = p.transformed
    u = math.exp(p.r)
    w = 1.0 - 2.0 * t.mu1 * t.nu1 - 2.0 * t.nu1**2
    if abs(w) < _DENOM_TOL:
        raise DegenerateDenominator("1 - 2 mu1 nu1 - 2 nu1^2 vanishes for these parameters")
    arr = np.asarray(p_value, dtype=float)
    scaled = arr / u
    root = np.sqrt(np.complex128(w))
    h_val = hermite(p.n, -1j * math.sqrt(2.0) * t.nu1 * np.asarray(scaled, dtype=complex) / root)
    h_sq = h_val * np.conj(h_val)
    residue = float(np.max(np.abs(np.imag(h_sq)))) if np.size(h_sq) else 0.0
    assert residue < _IMAG_RESIDUE_TOL, f"imaginary residue {residue:.3g} in quadrature density"
    values = (
        p.norm_sq
        / (math.sqrt(math.pi) * u)
        * np.exp(-(scaled**2))
        * abs(w) ** p.n
        * np.real(h_sq)
    )
    return float(values[()]) if np.ndim(p_value) == 0 else values


def quadrature_norm_report(p: StateParams, half_width: float | None = None, nodes: int = 2001) -> dict:
    """Self-normalization audit for the quadrature density prefactor.

    The implementation normalizes with the squeeze-frame constant
    N_{mu1,nu1}; the alternative reading normalizes with N_{mu,nu}.  Both
    integrals are reported so a sweep's metadata flags any discrepancy instead
    of hiding it.
    """
    from .phasespace import simpson_weights
    from .state import normalization_inv_sq

    if half_width is None:
        half_width = max(20.0, 8.0 * math.exp(abs(p.r)) * math.sqrt(p.n + 1.0))
    if nodes % 2 == 0:
        nodes += 1
    xs = np.linspace(-half_width, half_width, nodes)
    w = simpson_weights(nodes, 2.0 * half_width / (nodes - 1))
    values = quadrature_dist(p, xs)
    integral = float(w @ values)
    try:
        alt_ratio = p.norm_inv_sq / normalization_inv_sq(p.n, p.mu, p.nu)
        integral_alt = integral * alt_ratio
    except Exception:
        integral_alt = None
    return {
        "prefactor": "squeeze_frame",
        "integral": integral,
        "integral_unsqueezed_prefactor": integral_alt,
    }


def squeezing_degree(p: StateParams) -> float:
    """Optimal quadrature-squeezing degree S = 2 (<a^dag a> - |<a^dag^2>|).

    Negative values in [-1, 0) certify squeezing; the plain squeezed vacuum
    gives -2 e^(-r) sinh r, reaching the bound -1 as r grows.
    """
    nbar = moment_state(1, 1, p).real
    a_dag_sq = moment_state(2, 0, p)
    return 2.0 * (nbar - abs(a_dag_sq))
