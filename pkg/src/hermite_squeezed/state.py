"""State family H_n(mu a + nu a^dag) S(r)|0> and its moments.

Conjugating the polynomial excitation through the squeeze operator
S(r) = exp{(r/2)(a^2 - a^dag^2)} turns the weights (mu, nu) into the
hyperbolically rotated pair

    mu1 = mu cosh r - nu sinh r,      nu1 = nu cosh r - mu sinh r,

and every closed form in the package is written in terms of that pair.  The
normalization and all vacuum-frame moments <a^dag^l a^k> come from coefficient
extraction on a two-variable Gaussian generating function; the expansion used
here is a plain polynomial in (mu, nu), finite and regular even where the
textbook lambda = nu / sqrt(1 - 2 mu nu) substitution turns singular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .errors import NonPositiveNorm, UnsupportedMoment
from .specfun import scaled_legendre, two_var_exp_deriv

__all__ = [
    "StateParams",
    "TransformedParams",
    "transform_params",
    "normalization_inv_sq",
    "moment_vacuum",
    "moment_vacuum_lambda_form",
    "moment_vacuum_diagonal",
    "moment_state",
]

# N^-2 at or below this is treated as a vanishing state.
_NORM_TOL = 1e-14


@dataclass(frozen=True)
class TransformedParams:
    """Squeeze-frame excitation weights and the constants derived from them."""

    mu1: float
    nu1: float

    @property
    def A(self) -> float:
        """A = 1 - 2 mu1 nu1, the Gaussian weight of the normalization sum."""
        return 1.0 - 2.0 * self.mu1 * self.nu1

    @property
    def B_squared(self) -> float:
        """B^2 = 4 nu1^4 - A^2 (may be negative; only B^2 is ever needed)."""
        return 4.0 * self.nu1**4 - self.A**2

    @property
    def K(self) -> float:
        """K = 4 nu1^4 - (1 - 2 mu1 nu1)^2, the diagonal-moment discriminant."""
        return self.B_squared

    @property
    def lam(self) -> float:
        """lambda = nu1 / sqrt(1 - 2 mu1 nu1); only defined for 2 mu1 nu1 < 1."""
        denom = 1.0 - 2.0 * self.mu1 * self.nu1
        if denom <= 0.0:
            raise ValueError("lambda form undefined for 2 mu1 nu1 >= 1")
        return self.nu1 / math.sqrt(denom)


def transform_params(p: "StateParams") -> TransformedParams:
    """Hyperbolic rotation of (mu, nu) by the squeeze parameter r."""
    ch, sh = math.cosh(p.r), math.sinh(p.r)
    return TransformedParams(mu1=p.mu * ch - p.nu * sh, nu1=p.nu * ch - p.mu * sh)


def normalization_inv_sq(n: int, mu1: float, nu1: float) -> float:
    """Inverse squared normalization N^-2 = 2^n n! B^n P_n(2 nu1^2 / B).

    Evaluated through the real-arithmetic scaled Legendre polynomial with
    B^2 = 4 nu1^4 - A^2 and A = 1 - 2 mu1 nu1; every term of the expansion is
    non-negative, so the sum is positive for any non-degenerate state.

    Raises
    ------
    NonPositiveNorm
        If the value falls at or below the 1e-14 floor (the excitation
        annihilates the vacuum, e.g. nu1 = 0 with odd n).
    """
    if n < 0:
        raise ValueError("Hermite order must be non-negative")
    a = 1.0 - 2.0 * mu1 * nu1
    value = 2.0**n * math.factorial(n) * scaled_legendre(n, 2.0 * nu1**2, 4.0 * nu1**4 - a * a)
    if value <= _NORM_TOL:
        raise NonPositiveNorm(
            f"degenerate parameter combination (n={n}, mu1={mu1:.6g}, nu1={nu1:.6g})"
        )
    return value


@dataclass(frozen=True)
class StateParams:
    """Parameters (n, mu, nu, r) of the state H_n(mu a + nu a^dag) S(r)|0>.

    Construction checks that the excitation does not annihilate the squeezed
    vacuum and caches N^-2; every downstream formula reuses the cache.
    Instances are immutable and safe to share between threads.
    """

    n: int
    mu: float
    nu: float
    r: float = 0.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Hermite order n must be non-negative")
        if self.mu == 0.0 and self.nu == 0.0:
            raise ValueError("mu and nu cannot both vanish")
        self.norm_inv_sq  # noqa: B018 -- construction-time validation

    @cached_property
    def transformed(self) -> TransformedParams:
        return transform_params(self)

    @cached_property
    def norm_inv_sq(self) -> float:
        """Cached N^-2 (raises NonPositiveNorm for a vanishing state)."""
        t = self.transformed
        return normalization_inv_sq(self.n, t.mu1, t.nu1)

    @property
    def norm_sq(self) -> float:
        """Cached squared normalization N^2."""
        return 1.0 / self.norm_inv_sq


def moment_vacuum(l: int, k: int, n: int, mu: float, nu: float) -> complex:
    """Un-normalized vacuum-frame moment <0| H_n(O^dag) a^dag^l a^k H_n(O) |0>.

    With O = mu a + nu a^dag the generating-function expansion gives

        (2 nu)^(l+k) (n!)^2 / ((n-l)! (n-k)!)
            * d^(n-l)/ds d^(n-k)/dt exp((2 mu nu - 1)(s^2+t^2) + 4 nu^2 s t),

    a finite polynomial in (mu, nu) valid for every parameter value, including
    2 mu nu >= 1 where the lambda substitution breaks down.  Contributions with
    derivative order above n vanish (the generating function forces them to),
    and the value is zero unless l = k (mod 2).  The caller divides by N^-2.
    """
    if l < 0 or k < 0 or n < 0:
        raise ValueError("orders must be non-negative")
    if l > n or k > n:
        return 0j
    if (l - k) % 2:
        return 0j
    g = 2.0 * mu * nu - 1.0
    core = two_var_exp_deriv(n - l, n - k, g, g, 4.0 * nu**2)
    prefac = (2.0 * nu) ** (l + k) * math.factorial(n) ** 2 / (
        math.factorial(n - l) * math.factorial(n - k)
    )
    return complex(prefac * core)


def moment_vacuum_lambda_form(l: int, k: int, n: int, mu: float, nu: float) -> complex:
    """Cross-check path for :func:`moment_vacuum` via lambda = nu/sqrt(1-2 mu nu).

    Un-normalized:  nu^(2n) (2 lambda)^(l+k) (n!)^2 F_{n-l,n-k}(lambda^2)
                    / (lambda^(2n) (n-l)! (n-k)!).

    Only valid when 1 - 2 mu nu > 0 (and nu != 0); kept as an independent route
    for tests.
    """
    from .specfun import f_coeff

    if 1.0 - 2.0 * mu * nu <= 0.0:
        raise ValueError("lambda form requires 1 - 2 mu nu > 0")
    if l > n or k > n:
        return 0j
    if nu == 0.0:
        return complex(normalization_inv_sq(n, mu, nu)) if l == k == 0 else 0j
    lam = nu / math.sqrt(1.0 - 2.0 * mu * nu)
    value = (
        nu ** (2 * n)
        * (2.0 * lam) ** (l + k)
        * math.factorial(n) ** 2
        / (lam ** (2 * n) * math.factorial(n - l) * math.factorial(n - k))
        * f_coeff(n - l, n - k, lam**2)
    )
    return complex(value)


def moment_vacuum_diagonal(l: int, n: int, mu: float, nu: float) -> complex:
    """Second cross-check: the l = k diagonal through the scaled Legendre form.

    Un-normalized:  2^(n+l) (n!)^2 nu^(2l) K^((n-l)/2) P_{n-l}(2 nu^2 / sqrt(K))
                    / (n-l)!,   K = 4 nu^4 - (1 - 2 mu nu)^2.
    """
    if l > n:
        return 0j
    a = 1.0 - 2.0 * mu * nu
    k_disc = 4.0 * nu**4 - a * a
    value = (
        2.0 ** (n + l)
        * math.factorial(n) ** 2
        * nu ** (2 * l)
        * scaled_legendre(n - l, 2.0 * nu**2, k_disc)
        / math.factorial(n - l)
    )
    return complex(value)


def _normal_product(x: dict, y: dict) -> dict:
    """Product of two normal-ordered operator sums {(p, q): coeff}.

    Uses a^q a^dag^p = sum_j j! C(q, j) C(p, j) a^dag^(p-j) a^(q-j) to reorder
    the cross terms.
    """
    out: dict = {}
    for (p1, q1), c1 in x.items():
        for (p2, q2), c2 in y.items():
            for j in range(min(q1, p2) + 1):
                w = math.comb(q1, j) * math.comb(p2, j) * math.factorial(j)
                key = (p1 + p2 - j, q1 + q2 - j)
                out[key] = out.get(key, 0.0) + c1 * c2 * w
    return out


def _conjugated_normal_form(l: int, k: int, r: float) -> dict:
    """Normal-ordered expansion of S^dag(r) a^dag^l a^k S(r).

    S^dag a S = a cosh r - a^dag sinh r and its adjoint; the l-fold and k-fold
    products are reordered term by term.
    """
    ch, sh = math.cosh(r), math.sinh(r)
    a_rot = {(0, 1): ch, (1, 0): -sh}
    adag_rot = {(1, 0): ch, (0, 1): -sh}
    op = {(0, 0): 1.0}
    for _ in range(l):
        op = _normal_product(op, adag_rot)
    for _ in range(k):
        op = _normal_product(op, a_rot)
    return op


def moment_state(l: int, k: int, p: StateParams) -> complex:
    """Normalized moment <a^dag^l a^k> in the excited squeezed state.

    The operator is conjugated through S(r), expanded into a normal-ordered
    sum of vacuum-frame moments with cosh/sinh weights, each term evaluated by
    :func:`moment_vacuum` at (mu1, nu1), and the total divided by N^-2.
    Supports l + k <= 4, the range the measures need.
    """
    if l < 0 or k < 0:
        raise ValueError("orders must be non-negative")
    if l + k > 4:
        raise UnsupportedMoment(f"moment a^dag^{l} a^{k} outside the supported l + k <= 4 set")
    t = p.transformed
    total = 0j
    for (pp, qq), coeff in _conjugated_normal_form(l, k, p.r).items():
        if coeff == 0.0:
            continue
        total += coeff * moment_vacuum(pp, qq, p.n, t.mu1, t.nu1)
    return total * p.norm_sq
