"""Brute-force Fock-space reference implementations.

Everything here is deliberately independent of the closed forms: states are
built by operator recurrences on truncated coefficient vectors, expectation
values by ladder algebra, Wigner values through displaced-Fock matrix elements
(associated-Laguerre form), and open-system evolution by fixed-step RK4 on the
master equation exactly as the analytic module assumes it.  Oracle quantities
are admitted as test expectations only after a cutoff-doubling gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import CutoffTooSmall, NonPositiveNorm, TraceDrift, UnphysicalReservoir
from .reservoir import ReservoirParams
from .state import StateParams

__all__ = [
    "FockState",
    "FockDensity",
    "build_state",
    "oracle_moment",
    "oracle_pnd",
    "oracle_quadrature",
    "oracle_wigner",
    "oracle_wigner_state",
    "displaced_fock_matrix",
    "evolve_master_equation",
]

_TAIL_MASS_TOL = 1e-10
_TRACE_RENORM_TOL = 1e-10
_TRACE_DRIFT_LIMIT = 1e-6
_MAX_STEP = 1e-4


@dataclass(frozen=True)
class FockState:
    """Truncated Fock expansion of a pure state.

    ``amplitudes[m]`` is the coefficient of |m> after normalization;
    ``raw_norm_sq`` is the squared norm before normalization, which for the
    polynomial-excited squeezed vacuum equals the closed-form N^-2.
    """

    amplitudes: np.ndarray
    cutoff: int
    raw_norm_sq: float = 1.0

    def __post_init__(self):
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(norm - 1.0):.3g}")
        tail = float(np.sum(np.abs(self.amplitudes[self.cutoff - 9 :]) ** 2))
        if tail > _TAIL_MASS_TOL:
            raise CutoffTooSmall(f"tail mass {tail:.3g} above cutoff-10")

    def density(self) -> "FockDensity":
        """Pure-state density matrix |psi><psi|."""
        return FockDensity(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass
class FockDensity:
    """Truncated density matrix with physicality checks."""

    matrix: np.ndarray
    trace_drift: float = 0.0
    hermiticity_residue: float = field(default=0.0, repr=False)

    @property
    def cutoff(self) -> int:
        return self.matrix.shape[0] - 1

    def validate(self, psd_floor: float = -1e-8) -> "FockDensity":
        """Check Hermiticity (1e-12), unit trace (1e-8) and spectrum floor."""
        herm = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if herm > 1e-12:
            raise ValueError(f"density not Hermitian: residue {herm:.3g}")
        tr = complex(np.trace(self.matrix))
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"density trace {tr:.12g} != 1")
        mineig = float(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T)).min())
        if mineig < psd_floor:
            raise ValueError(f"density has eigenvalue {mineig:.3g} below floor")
        return self


def _apply_excitation(vec: np.ndarray, mu: float, nu: float, sq: np.ndarray) -> np.ndarray:
    """Matrix-free (mu a + nu a^dag) applied to a coefficient vector."""
    out = np.zeros_like(vec)
    out[:-1] += mu * sq[1:] * vec[1:]
    out[1:] += nu * sq[1:] * vec[:-1]
    return out


def build_state(p: StateParams, cutoff: int) -> FockState:
    """Construct H_n(mu a + nu a^dag) S(r)|0> in a truncated Fock basis.

    The squeezed vacuum enters through its even-photon coefficients
    c_{2m} = sech^(1/2) r (-tanh r / 2)^m sqrt((2m)!) / m!, then the Hermite
    excitation is applied by the vector recurrence
    v_{k+1} = 2 O v_k - 2 k v_{k-1} with matrix-free O = mu a + nu a^dag.
    """
    if cutoff < 2 * p.n + 20:
        raise CutoffTooSmall(f"cutoff {cutoff} below 2n + 20 = {2 * p.n + 20}")
    dim = cutoff + 1
    sv = np.zeros(dim, dtype=complex)
    coeff = math.sqrt(1.0 / math.cosh(p.r))
    sv[0] = coeff
    for m in range(1, cutoff // 2 + 1):
        coeff *= (-math.tanh(p.r) / 2.0) * math.sqrt((2 * m - 1) * (2 * m)) / m
        sv[2 * m] = coeff

    sq = np.sqrt(np.arange(dim, dtype=float))
    v_prev = sv
    if p.n == 0:
        excited = sv
    else:
        v_cur = 2.0 * _apply_excitation(sv, p.mu, p.nu, sq)
        for k in range(1, p.n):
            v_prev, v_cur = v_cur, 2.0 * _apply_excitation(v_cur, p.mu, p.nu, sq) - 2.0 * k * v_prev
        excited = v_cur

    raw_norm_sq = float(np.vdot(excited, excited).real)
    if raw_norm_sq <= 1e-14:
        raise NonPositiveNorm("excitation annihilates the squeezed vacuum at this cutoff")
    return FockState(
        amplitudes=excited / math.sqrt(raw_norm_sq), cutoff=cutoff, raw_norm_sq=raw_norm_sq
    )


def oracle_moment(state: FockState, l: int, k: int) -> complex:
    """<a^dag^l a^k> by direct ladder contraction on the coefficient vector."""
    if l + k > state.cutoff // 2:
        raise ValueError("moment order too high for this cutoff")
    c = state.amplitudes
    m = np.arange(state.cutoff + 1)
    shifted = m - k + l
    mask = (m >= k) & (shifted <= state.cutoff)
    m = m[mask]
    shifted = shifted[mask]
    weight = np.ones(m.size)
    for i in range(k):  # sqrt(m!/(m-k)!)
        weight *= m - i
    for i in range(l):  # sqrt((m-k+l)!/(m-k)!)
        weight *= m - k + 1 + i
    weight = np.sqrt(weight)
    return complex(np.sum(np.conj(c[shifted]) * weight * c[m]))


def oracle_pnd(state: FockState) -> np.ndarray:
    """Photon-number distribution |<m|psi>|^2."""
    return np.abs(state.amplitudes) ** 2


def oracle_quadrature(state: FockState, p_value):
    """|<p|psi>|^2 from the momentum-basis Hermite functions.

    <p|m> = pi^(-1/4) (-i)^m H_m(p) e^(-p^2/2) / sqrt(2^m m!), the phase
    convention of |p> = pi^(-1/4) exp(-p^2/2 + i sqrt(2) p a^dag + a^dag^2/2)|0>.
    """
    p_arr = np.atleast_1d(np.asarray(p_value, dtype=float))
    psi = np.zeros(p_arr.shape, dtype=complex)
    h_prev = np.pi**-0.25 * np.exp(-0.5 * p_arr**2)
    psi += state.amplitudes[0] * h_prev
    if state.cutoff >= 1:
        h_cur = math.sqrt(2.0) * p_arr * h_prev
        psi += state.amplitudes[1] * (-1j) * h_cur
        phase = -1j
        for m in range(1, state.cutoff):
            h_prev, h_cur = h_cur, (
                math.sqrt(2.0 / (m + 1)) * p_arr * h_cur - math.sqrt(m / (m + 1.0)) * h_prev
            )
            phase *= -1j
            psi += state.amplitudes[m + 1] * phase * h_cur
    out = np.abs(psi) ** 2
    return out[0] if np.ndim(p_value) == 0 else out


def displaced_fock_matrix(alpha: complex, dim: int) -> np.ndarray:
    """Matrix elements <m|D(alpha)|k> of the displacement operator.

    Associated-Laguerre closed form (for m >= k):
    <m|D(alpha)|k> = sqrt(k!/m!) alpha^(m-k) e^(-|alpha|^2/2) L_k^(m-k)(|alpha|^2),
    and the adjoint-symmetric expression with (-conj(alpha)) for m < k.
    """
    if alpha == 0:
        return np.eye(dim, dtype=complex)
    idx = np.arange(dim)
    m, k = np.meshgrid(idx, idx, indexing="ij")
    lo = np.minimum(m, k)
    d = np.abs(m - k)
    x = abs(alpha) ** 2
    lag = eval_genlaguerre(lo, d, x)
    log_mag = 0.5 * (gammaln(lo + 1.0) - gammaln(lo + d + 1.0)) + d * math.log(abs(alpha)) - x / 2.0
    direction = np.where(m >= k, alpha / abs(alpha), -np.conj(alpha) / abs(alpha))
    return lag * np.exp(log_mag) * direction**d


def oracle_wigner(rho: FockDensity, alpha: complex) -> float:
    """Displaced-parity Wigner value, normalized so that int W dq dp = 1.

    W(alpha) = (1/pi) sum_k (-1)^k <k| D(-alpha) rho D(alpha) |k> in the
    alpha = (q + i p)/sqrt(2) convention used throughout (vacuum peak 1/pi).
    """
    dim = rho.matrix.shape[0]
    v = displaced_fock_matrix(-alpha, dim)
    diag = np.einsum("ij,jk,ik->i", v, rho.matrix, v.conj(), optimize=True)
    tail = float(np.sum(np.abs(diag[-10:])))
    if tail > _TAIL_MASS_TOL:
        raise CutoffTooSmall(f"displaced-parity tail {tail:.3g} too large at |alpha|={abs(alpha):.3g}")
    signs = (-1.0) ** np.arange(dim)
    value = (1.0 / math.pi) * np.sum(signs * diag)
    return float(value.real)


def oracle_wigner_state(state: FockState, alpha: complex) -> float:
    """Pure-state Wigner value through one displaced-parity matvec."""
    v = displaced_fock_matrix(-alpha, state.cutoff + 1)
    displaced = v @ state.amplitudes
    tail = float(np.sum(np.abs(displaced[-10:]) ** 2))
    if tail > _TAIL_MASS_TOL:
        raise CutoffTooSmall(f"displaced-state tail {tail:.3g} too large at |alpha|={abs(alpha):.3g}")
    signs = (-1.0) ** np.arange(state.cutoff + 1)
    return float((1.0 / math.pi) * np.sum(signs * np.abs(displaced) ** 2))


def _master_equation_rhs(rho: np.ndarray, nbar: float, m_corr: complex, sq: np.ndarray) -> np.ndarray:
    """d rho / d(kappa t) for the phase-sensitive master equation.

    nbar L[a^dag] rho + (nbar+1) L[a] rho + M D[a] rho + conj(M) D[a^dag] rho
    with L[O^dag] rho = 2 O^dag rho O - O O^dag rho - rho O O^dag and the
    D superoperators exactly as the analytic module assumes them:
    D[a] rho = 2 a^dag rho a^dag - a^dag^2 rho - rho a^dag^2.
    All ladder applications are index shifts (matrix-free).
    """

    def a_left(x):
        out = np.zeros_like(x)
        out[:-1] = sq[1:, None] * x[1:]
        return out

    def adag_left(x):
        out = np.zeros_like(x)
        out[1:] = sq[1:, None] * x[:-1]
        return out

    def a_right(x):
        out = np.zeros_like(x)
        out[:, 1:] = sq[None, 1:] * x[:, :-1]
        return out

    def adag_right(x):
        out = np.zeros_like(x)
        out[:, :-1] = sq[None, 1:] * x[:, 1:]
        return out

    rhs = np.zeros_like(rho)
    if nbar != 0.0:
        # L[a^dag] rho = 2 a^dag rho a - a a^dag rho - rho a a^dag
        rhs += nbar * (
            2.0 * a_right(adag_left(rho)) - a_left(adag_left(rho)) - adag_right(a_right(rho))
        )
    # L[a] rho = 2 a rho a^dag - a^dag a rho - rho a^dag a
    rhs += (nbar + 1.0) * (
        2.0 * adag_right(a_left(rho)) - adag_left(a_left(rho)) - a_right(adag_right(rho))
    )
    if m_corr != 0:
        # D[a] rho = 2 a^dag rho a^dag - a^dag^2 rho - rho a^dag^2
        rhs += m_corr * (
            2.0 * adag_right(adag_left(rho))
            - adag_left(adag_left(rho))
            - adag_right(adag_right(rho))
        )
        # D[a^dag] rho = 2 a rho a - a^2 rho - rho a^2
        rhs += np.conj(m_corr) * (
            2.0 * a_right(a_left(rho)) - a_left(a_left(rho)) - a_right(a_right(rho))
        )
    return rhs


def evolve_master_equation(rho0: FockDensity, res: ReservoirParams, steps: int) -> FockDensity:
    """Fixed-step RK4 integration of the master equation to kappa t = res.kappa_t.

    The step must satisfy d(kappa t) <= 1e-4.  Trace drift above 1e-10 is
    renormalized and recorded; drift above 1e-6 raises TraceDrift (step too
    large or cutoff too small).
    """
    if abs(res.M) ** 2 > res.nbar * (res.nbar + 1.0) + 1e-12:
        raise UnphysicalReservoir("|M|^2 exceeds nbar (nbar + 1)")
    if res.kappa_t == 0.0:
        return FockDensity(rho0.matrix.copy())
    if steps <= 0:
        raise ValueError("steps must be positive")
    dt = res.kappa_t / steps
    if dt > _MAX_STEP + 1e-15:
        raise ValueError(f"step {dt:.3g} exceeds the 1e-4 ceiling; increase steps")

    dim = rho0.matrix.shape[0]
    sq = np.sqrt(np.arange(dim, dtype=float))
    rho = rho0.matrix.astype(complex).copy()
    max_drift = 0.0
    for _ in range(steps):
        k1 = _master_equation_rhs(rho, res.nbar, res.M, sq)
        k2 = _master_equation_rhs(rho + 0.5 * dt * k1, res.nbar, res.M, sq)
        k3 = _master_equation_rhs(rho + 0.5 * dt * k2, res.nbar, res.M, sq)
        k4 = _master_equation_rhs(rho + dt * k3, res.nbar, res.M, sq)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        tr = float(np.trace(rho).real)
        drift = abs(tr - 1.0)
        max_drift = max(max_drift, drift)
        if drift > _TRACE_DRIFT_LIMIT:
            raise TraceDrift(f"trace drift {drift:.3g} exceeds 1e-6")
        if drift > _TRACE_RENORM_TOL:
            rho = rho / tr
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    return FockDensity(rho, trace_drift=max_drift, hermiticity_residue=herm)
