"""Stable evaluation of the special functions behind the closed forms.

Everything in this package reduces to three ingredients: physicists' Hermite
polynomials at complex argument, Legendre polynomials, and coefficient
extraction from two-variable Gaussian generating functions of the shape
exp(a s^2 + b t^2 + c s t).  All of them are iterative recurrences or finite
combinatorial sums in double precision; the supported order range (a few tens)
never needs asymptotic expansions.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "hermite",
    "legendre",
    "scaled_legendre",
    "f_coeff",
    "two_var_exp_deriv",
    "two_var_exp_deriv_scaled",
    "exp_quadratic_deriv",
]

# Exact integer factorials up to 20!, log-gamma accumulation above.
_EXACT_FACTORIAL_LIMIT = 20

# |quadratic coefficient| below which exp_quadratic_deriv switches from the
# Hermite-recurrence route to the explicit polynomial in (a, g).
_QUADRATIC_COEFF_EPS = 1e-8


def _fact(k: int) -> float:
    """k! as a float: exact up to 20!, log-gamma beyond."""
    if k <= _EXACT_FACTORIAL_LIMIT:
        return float(math.factorial(k))
    return math.exp(math.lgamma(k + 1))


def _as_operand(z):
    """Promote a scalar or array operand to an ndarray plus a scalar flag."""
    arr = np.asarray(z)
    return arr, arr.ndim == 0


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z) for real or complex argument.

    Uses the three-term recurrence H_{k+1}(z) = 2 z H_k(z) - 2 k H_{k-1}(z)
    seeded with H_0 = 1 and H_1 = 2z.  ``z`` may be a scalar or an ndarray.

    Raises
    ------
    OverflowError
        If the value leaves the representable double-precision range.
    """
    if n < 0:
        raise ValueError("Hermite order must be non-negative")
    arr, scalar = _as_operand(z)
    dtype = np.result_type(arr.dtype, np.float64)
    h_prev = np.ones(arr.shape, dtype=dtype)
    if n == 0:
        return h_prev[()] if scalar else h_prev
    h_cur = 2.0 * arr.astype(dtype)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            h_prev, h_cur = h_cur, 2.0 * arr * h_cur - 2.0 * k * h_prev
    if not np.all(np.isfinite(h_cur)):
        raise OverflowError(f"H_{n} overflowed double precision at |z| ~ {np.max(np.abs(arr)):.3g}")
    return h_cur[()] if scalar else h_cur


def legendre(n: int, x):
    """Legendre polynomial P_n(x) by the Bonnet recurrence.

    (k+1) P_{k+1}(x) = (2k+1) x P_k(x) - k P_{k-1}(x), with P_0 = 1, P_1 = x.
    Accepts real or complex scalars or ndarrays.
    """
    if n < 0:
        raise ValueError("Legendre order must be non-negative")
    arr, scalar = _as_operand(x)
    dtype = np.result_type(arr.dtype, np.float64)
    p_prev = np.ones(arr.shape, dtype=dtype)
    if n == 0:
        return p_prev[()] if scalar else p_prev
    p_cur = arr.astype(dtype)
    for k in range(1, n):
        p_prev, p_cur = p_cur, ((2 * k + 1) * arr * p_cur - k * p_prev) / (k + 1)
    if not np.all(np.isfinite(p_cur)):
        raise OverflowError(f"P_{n} overflowed double precision")
    return p_cur[()] if scalar else p_cur


def scaled_legendre(n: int, c: float, b_squared: float) -> float:
    """B^n P_n(c / B) with B = sqrt(b_squared), computed in real arithmetic.

    The combination B^n P_n(c/B) is a polynomial in c and b_squared,

        sum_l  C(n, 2l) C(2l, l) c^(n-2l) (c^2 - b_squared)^l / 4^l,

    so the value is exactly real even when ``b_squared`` is negative and the
    naive route would walk through a complex square root.
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    d = c * c - b_squared
    total = 0.0
    for l in range(n // 2 + 1):
        weight = math.comb(n, 2 * l) * math.comb(2 * l, l)
        total += weight * c ** (n - 2 * l) * d**l / 4.0**l
    return total


def two_var_exp_deriv(m: int, n: int, coef_s2: float, coef_t2: float, coef_st: float) -> float:
    """d^m/ds^m d^n/dt^n exp(coef_s2 s^2 + coef_t2 t^2 + coef_st s t) at s = t = 0.

    Trinomial expansion gives the finite sum

        m! n! sum_j coef_s2^((m-j)/2) coef_t2^((n-j)/2) coef_st^j
                    / (j! ((m-j)/2)! ((n-j)/2)!)

    over j <= min(m, n) with m - j and n - j both even; the value vanishes
    identically when m + n is odd.
    """
    mant, scale = two_var_exp_deriv_scaled(m, n, coef_s2, coef_t2, coef_st)
    return mant * math.exp(scale)


def two_var_exp_deriv_scaled(
    m: int, n: int, coef_s2: float, coef_t2: float, coef_st: float
) -> tuple[float, float]:
    """Like :func:`two_var_exp_deriv` but returned as (mantissa, log_scale).

    The value is ``mantissa * exp(log_scale)``.  For orders up to 20 the sum is
    accumulated with exact integer multinomials and ``log_scale`` is zero; above
    that, each term is assembled in log magnitude so that photon-number sums
    with m in the hundreds never overflow an intermediate.
    """
    if m < 0 or n < 0:
        raise ValueError("derivative orders must be non-negative")
    if (m + n) % 2:
        return 0.0, 0.0

    if max(m, n) <= _EXACT_FACTORIAL_LIMIT:
        total = 0.0
        for j in range(min(m, n), -1, -1):
            if (m - j) % 2 or (n - j) % 2:
                continue
            hm, hn = (m - j) // 2, (n - j) // 2
            weight = math.factorial(m) * math.factorial(n) // (
                math.factorial(j) * math.factorial(hm) * math.factorial(hn)
            )
            total += weight * coef_s2**hm * coef_t2**hn * coef_st**j
        return total, 0.0

    # log-magnitude accumulation with a common scale
    logs: list[float] = []
    signs: list[float] = []
    for j in range(min(m, n) + 1):
        if (m - j) % 2 or (n - j) % 2:
            continue
        hm, hn = (m - j) // 2, (n - j) // 2
        sign = 1.0
        log_mag = (
            math.lgamma(m + 1)
            + math.lgamma(n + 1)
            - math.lgamma(j + 1)
            - math.lgamma(hm + 1)
            - math.lgamma(hn + 1)
        )
        degenerate = False
        for coef, expo in ((coef_s2, hm), (coef_t2, hn), (coef_st, j)):
            if expo == 0:
                continue
            if coef == 0.0:
                degenerate = True
                break
            log_mag += expo * math.log(abs(coef))
            if coef < 0 and expo % 2:
                sign = -sign
        if degenerate:
            continue
        logs.append(log_mag)
        signs.append(sign)
    if not logs:
        return 0.0, 0.0
    scale = max(logs)
    mant = math.fsum(s * math.exp(lg - scale) for s, lg in zip(signs, logs))
    return mant, scale


def f_coeff(m: int, n: int, lambda_squared: float) -> float:
    """Two-index generating-function coefficient F_{m,n}.

    F_{m,n} = d^m/ds^m d^n/dt^n exp(-t^2 - s^2 + 4 s t lambda_squared) at 0.
    Symmetric in (m, n) and identically zero when m + n is odd.
    """
    return two_var_exp_deriv(m, n, -1.0, -1.0, 4.0 * lambda_squared)


def exp_quadratic_deriv(m: int, a, g):
    """m-th derivative of exp(g x^2 + a x) at x = 0.

    Equals (-g)^(m/2) H_m(a / (2 sqrt(-g))) for g != 0, which is how the value
    is computed when |g| >= 1e-8 (branch-consistent: flipping the square root
    flips both factors).  Below that threshold the explicit polynomial

        sum_j m! g^j a^(m-2j) / (j! (m-2j)!)

    takes over, which is exact at the removable point g = 0.  ``a`` may be a
    complex scalar or ndarray; ``g`` is a scalar (real or complex).
    """
    if m < 0:
        raise ValueError("derivative order must be non-negative")
    arr, scalar = _as_operand(a)
    arr = arr.astype(complex)
    if m == 0:
        out = np.ones(arr.shape, dtype=complex)
        return out[()] if scalar else out
    if abs(g) >= _QUADRATIC_COEFF_EPS:
        s = np.sqrt(np.complex128(-g))
        out = s**m * hermite(m, arr / (2.0 * s))
    else:
        out = np.zeros(arr.shape, dtype=complex)
        for j in range(m // 2 + 1):
            weight = math.factorial(m) // (math.factorial(j) * math.factorial(m - 2 * j))
            out = out + weight * g**j * arr ** (m - 2 * j)
    return out[()] if scalar else out
