import math

import numpy as np
import pytest

from conftest import assert_close, build_escalated, random_state
from hermite_squeezed import StateParams, moment_state, moment_vacuum, normalization_inv_sq, transform_params
from hermite_squeezed.errors import NonPositiveNorm, UnsupportedMoment
from hermite_squeezed.oracle import build_state, oracle_moment
from hermite_squeezed.specfun import scaled_legendre
from hermite_squeezed.state import (
    moment_vacuum_diagonal,
    moment_vacuum_lambda_form,
)


class TestTransform:
    def test_pure_subtraction_weights(self):
        for r in (0.2, 0.7):
            t = transform_params(StateParams(n=1, mu=1.0, nu=0.0, r=r))
            assert t.mu1 == pytest.approx(math.cosh(r))
            assert t.nu1 == pytest.approx(-math.sinh(r))

    def test_pure_addition_weights(self):
        for r in (0.2, 0.7):
            t = transform_params(StateParams(n=1, mu=0.0, nu=1.0, r=r))
            assert t.mu1 == pytest.approx(-math.sinh(r))
            assert t.nu1 == pytest.approx(math.cosh(r))

    def test_identity_squeeze(self, rng):
        for _ in range(20):
            mu, nu = rng.uniform(-2, 2, size=2)
            if mu == 0 and nu == 0:
                continue
            try:
                t = transform_params(StateParams(n=0, mu=mu, nu=nu, r=0.0))
            except NonPositiveNorm:
                continue
            assert (t.mu1, t.nu1) == (mu, nu)

    def test_derived_accessors(self):
        t = transform_params(StateParams(n=2, mu=0.4, nu=0.3, r=0.0))
        assert t.A == pytest.approx(1 - 2 * 0.4 * 0.3)
        assert t.B_squared == pytest.approx(4 * 0.3**4 - t.A**2)
        assert t.K == t.B_squared
        assert t.lam == pytest.approx(0.3 / math.sqrt(1 - 0.24))

    def test_lambda_undefined_past_singularity(self):
        t = transform_params(StateParams(n=1, mu=1.0, nu=1.0, r=0.0))
        with pytest.raises(ValueError):
            t.lam


class TestNormalization:
    def test_vacuum(self):
        assert normalization_inv_sq(0, 0.8, 0.1) == pytest.approx(1.0)

    def test_order_one(self, rng):
        # <0| H_1(O^dag) H_1(O) |0> = 4 nu1^2 by direct operator expansion
        for _ in range(20):
            mu1, nu1 = rng.uniform(-2, 2, size=2)
            if abs(nu1) < 1e-4:
                continue
            assert normalization_inv_sq(1, mu1, nu1) == pytest.approx(4 * nu1**2)

    def test_order_two_unit_weights(self):
        # 2^2 2! B^2 P_2(2/B) with (mu1, nu1) = (1, 1)
        assert normalization_inv_sq(2, 1.0, 1.0) == pytest.approx(36.0)
        st = build_state(StateParams(n=2, mu=1.0, nu=1.0, r=0.0), 40)
        assert st.raw_norm_sq == pytest.approx(36.0, rel=1e-10)

    def test_degenerate_raises(self):
        with pytest.raises(NonPositiveNorm):
            normalization_inv_sq(1, 0.7, 0.0)
        with pytest.raises(NonPositiveNorm):
            StateParams(n=3, mu=1.0, nu=0.0, r=0.0)

    def test_both_weights_zero_rejected(self):
        with pytest.raises(ValueError):
            StateParams(n=1, mu=0.0, nu=0.0, r=0.3)

    def test_pure_subtraction_reduction(self):
        # (mu, nu) = (1, 0): N^-2 = 2^n n! (sqrt(1-2e^{2r}))^n P_n(2 sinh^2 r / sqrt(1-2e^{2r}))
        for n in range(5):
            for r in (0.1, 0.4, 0.8):
                p = StateParams(n=n, mu=1.0, nu=0.0, r=r)
                reduced = (
                    2.0**n
                    * math.factorial(n)
                    * scaled_legendre(n, 2 * math.sinh(r) ** 2, 1 - 2 * math.exp(2 * r))
                )
                assert p.norm_inv_sq == pytest.approx(reduced, rel=1e-12)

    def test_oracle_agreement_random_draws(self, rng):
        # 1000 draws: positive closed-form norm whenever the oracle norm is
        # healthy, with 1e-8 relative agreement
        checked = 0
        for _ in range(1000):
            n = int(rng.integers(0, 7))
            mu = float(rng.uniform(-3, 3))
            nu = float(rng.uniform(-3, 3))
            r = float(rng.uniform(-1, 1))
            if mu == 0 and nu == 0:
                continue
            try:
                p = StateParams(n=n, mu=mu, nu=nu, r=r)
            except NonPositiveNorm:
                continue
            st = build_escalated(p, start=80)
            if st.raw_norm_sq <= 1e-12:
                continue
            assert p.norm_inv_sq > 0
            assert_close(p.norm_inv_sq, st.raw_norm_sq, rel=1e-8, label=f"norm n={n}")
            checked += 1
        assert checked > 700


def _transformed(mu, nu, r):
    return mu * math.cosh(r) - nu * math.sinh(r), nu * math.cosh(r) - mu * math.sinh(r)


class TestMomentVacuum:
    def test_consistency_with_normalization(self, rng):
        for _ in range(30):
            n = int(rng.integers(0, 6))
            mu, nu = rng.uniform(-2, 2, size=2)
            try:
                expected = normalization_inv_sq(n, mu, nu)
            except NonPositiveNorm:
                continue
            assert moment_vacuum(0, 0, n, mu, nu).real == pytest.approx(expected, rel=1e-12)

    def test_vacuum_has_no_excitation(self, rng):
        for _ in range(10):
            mu, nu = rng.uniform(-2, 2, size=2)
            for l, k in [(1, 1), (2, 2), (0, 2), (2, 0)]:
                assert moment_vacuum(l, k, 0, mu, nu) == 0j

    def test_parity_selection(self):
        assert moment_vacuum(1, 2, 3, 0.5, 0.7) == 0j
        assert moment_vacuum(0, 1, 4, 0.5, 0.7) == 0j

    def test_order_above_n_vanishes(self):
        assert moment_vacuum(3, 3, 2, 0.5, 0.7) == 0j

    def test_against_oracle_n1(self, rng):
        for _ in range(10):
            mu, nu = rng.uniform(-2, 2, size=2)
            if abs(nu) < 1e-3:
                continue
            p = StateParams(n=1, mu=float(mu), nu=float(nu), r=0.0)
            st = build_escalated(p)
            unnorm = moment_vacuum(1, 1, 1, float(mu), float(nu))
            expected = oracle_moment(st, 1, 1) * st.raw_norm_sq
            assert_close(unnorm.real, expected.real, rel=1e-10, label="n=1 <n>")

    def test_lambda_form_cross_check(self, rng):
        # valid where 1 - 2 mu nu > 0
        checked = 0
        for _ in range(200):
            n = int(rng.integers(0, 6))
            mu, nu = rng.uniform(-1.5, 1.5, size=2)
            if 1 - 2 * mu * nu <= 1e-3 or abs(nu) < 1e-3:
                continue
            l = int(rng.integers(0, n + 1))
            k = l + (n - l) % 2  # keep parity
            if k > n:
                continue
            direct = moment_vacuum(l, k, n, mu, nu)
            lam_form = moment_vacuum_lambda_form(l, k, n, mu, nu)
            assert_close(direct.real, lam_form.real, rel=1e-9, abs_floor=1e-12)
            checked += 1
        assert checked > 50

    def test_diagonal_scaled_legendre_cross_check(self, rng):
        for _ in range(100):
            n = int(rng.integers(0, 6))
            l = int(rng.integers(0, n + 1))
            mu, nu = rng.uniform(-2, 2, size=2)
            direct = moment_vacuum(l, l, n, mu, nu)
            diag = moment_vacuum_diagonal(l, n, mu, nu)
            assert_close(direct.real, diag.real, rel=1e-9, abs_floor=1e-12)


class TestMomentState:
    def test_squeezed_vacuum_mean_photon(self):
        for r in (0.1, 0.3, 0.6, 0.9):
            p = StateParams(n=0, mu=1.0, nu=0.0, r=r)
            assert moment_state(1, 1, p).real == pytest.approx(math.sinh(r) ** 2, abs=1e-12)

    def test_squeezed_vacuum_a_squared(self):
        for r in (0.2, 0.5):
            p = StateParams(n=0, mu=1.0, nu=0.5, r=r)
            assert moment_state(0, 2, p).real == pytest.approx(-0.5 * math.sinh(2 * r), abs=1e-12)

    def test_mean_annihilation_vanishes(self, rng):
        for _ in range(20):
            p = random_state(rng)
            assert abs(moment_state(0, 1, p)) == 0.0

    def test_hermiticity(self, rng):
        for _ in range(5):
            p = random_state(rng)
            for l, k in [(1, 1), (2, 0), (2, 2), (1, 3)]:
                assert moment_state(l, k, p) == pytest.approx(
                    moment_state(k, l, p).conjugate(), rel=1e-12, abs=1e-12
                )

    def test_rejects_high_order(self):
        with pytest.raises(UnsupportedMoment):
            moment_state(3, 2, StateParams(n=1, mu=1.0, nu=1.0, r=0.1))

    def test_against_oracle(self, rng):
        for _ in range(15):
            p = random_state(rng)
            st = build_escalated(p)
            for l, k in [(1, 1), (2, 2), (2, 0), (0, 2)]:
                assert_close(
                    moment_state(l, k, p).real,
                    oracle_moment(st, l, k).real,
                    rel=1e-8,
                    label=f"moment ({l},{k}) {p}",
                )
