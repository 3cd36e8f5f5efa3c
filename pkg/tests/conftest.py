import numpy as np
import pytest

from hermite_squeezed import StateParams
from hermite_squeezed.errors import CutoffTooSmall, NonPositiveNorm
from hermite_squeezed.oracle import build_state


def assert_close(actual, expected, rel=1e-7, abs_floor=1e-10, label=""):
    """|actual - expected| <= max(abs_floor, rel * max(|actual|, |expected|))."""
    actual = complex(actual) if isinstance(actual, complex) else float(np.real_if_close(actual))
    scale = max(abs(actual), abs(expected))
    bound = max(abs_floor, rel * scale)
    assert abs(actual - expected) <= bound, (
        f"{label} actual={actual!r} expected={expected!r} "
        f"diff={abs(actual - expected):.3g} bound={bound:.3g}"
    )


def build_escalated(params: StateParams, start: int = 80, ceiling: int = 1500):
    """Fock build with cutoff escalation until the tail-adequacy gate passes."""
    cutoff = start
    while True:
        try:
            return build_state(params, cutoff)
        except CutoffTooSmall:
            cutoff *= 2
            if cutoff > ceiling:
                raise


def oracle_wigner_escalated(params: StateParams, alpha, start: int = 80, ceiling: int = 1500):
    """Pure-state oracle Wigner value, doubling the cutoff until tails pass."""
    from hermite_squeezed.oracle import oracle_wigner_state

    cutoff = start
    while True:
        try:
            return oracle_wigner_state(build_escalated(params, start=cutoff), alpha)
        except CutoffTooSmall:
            cutoff *= 2
            if cutoff > ceiling:
                raise


def random_state(rng, n_max=4, r_max=0.9, weight_max=2.0, norm_floor=1e-8) -> StateParams:
    """Random valid state in the acceptance range, redrawing degenerate combos."""
    while True:
        n = int(rng.integers(0, n_max + 1))
        mu = float(rng.uniform(-weight_max, weight_max))
        nu = float(rng.uniform(-weight_max, weight_max))
        r = float(rng.uniform(-r_max, r_max))
        try:
            p = StateParams(n=n, mu=mu, nu=nu, r=r)
        except (NonPositiveNorm, ValueError):
            continue
        if p.norm_inv_sq < norm_floor:
            continue  # nearly vanishing state: oracle comparisons get ill-conditioned
        return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
