import math

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import assert_close, build_escalated, random_state
from hermite_squeezed import ReservoirParams, StateParams
from hermite_squeezed.errors import CutoffTooSmall, TraceDrift
from hermite_squeezed.oracle import (
    FockDensity,
    FockState,
    build_state,
    displaced_fock_matrix,
    evolve_master_equation,
    oracle_moment,
    oracle_pnd,
    oracle_quadrature,
    oracle_wigner,
    oracle_wigner_state,
)


class TestBuildState:
    def test_vacuum(self):
        st = build_state(StateParams(n=0, mu=1.0, nu=0.0, r=0.0), 40)
        assert st.amplitudes[0] == pytest.approx(1.0)
        assert np.max(np.abs(st.amplitudes[1:])) == 0.0

    def test_single_photon(self):
        # H_1(a^dag)|0> = 2 a^dag |0>, normalized |1>
        st = build_state(StateParams(n=1, mu=0.0, nu=1.0, r=0.0), 40)
        assert abs(st.amplitudes[1]) == pytest.approx(1.0)
        assert st.raw_norm_sq == pytest.approx(4.0)

    def test_norm_matches_closed_form(self, rng):
        for _ in range(50):
            p = random_state(rng)
            st = build_escalated(p)
            assert_close(st.raw_norm_sq, p.norm_inv_sq, rel=1e-8, label=f"raw norm {p}")

    def test_cutoff_precondition(self):
        with pytest.raises(CutoffTooSmall):
            build_state(StateParams(n=4, mu=1.0, nu=1.0, r=0.1), 20)

    def test_squeeze_order_invariance(self, rng):
        # norm^2 is the same whether r is folded into (mu1, nu1) or applied
        # as the squeeze (unitary invariance of the norm)
        for _ in range(20):
            p = random_state(rng, n_max=4)
            t = p.transformed
            try:
                p_direct = StateParams(n=p.n, mu=t.mu1, nu=t.nu1, r=0.0)
            except Exception:
                continue
            st_a = build_escalated(p)
            st_b = build_escalated(p_direct)
            assert_close(st_a.raw_norm_sq, st_b.raw_norm_sq, rel=1e-10)

    def test_tail_validation(self):
        with pytest.raises(ValueError):
            FockState(amplitudes=np.ones(41) / 10.0, cutoff=40)


class TestOracleMoment:
    def test_vacuum(self):
        st = build_state(StateParams(n=0, mu=1.0, nu=0.0, r=0.0), 40)
        assert oracle_moment(st, 1, 1) == 0j

    def test_single_photon(self):
        st = build_state(StateParams(n=1, mu=0.0, nu=1.0, r=0.0), 40)
        assert oracle_moment(st, 1, 1).real == pytest.approx(1.0)

    def test_squeezed_vacuum_mean(self):
        st = build_state(StateParams(n=0, mu=1.0, nu=0.0, r=0.3), 60)
        assert oracle_moment(st, 1, 1).real == pytest.approx(math.sinh(0.3) ** 2, rel=1e-12)


class TestDisplacedFock:
    def test_identity_at_zero(self):
        assert np.array_equal(displaced_fock_matrix(0.0, 12), np.eye(12))

    def test_matches_matrix_exponential(self):
        dim = 40
        a_op = np.diag(np.sqrt(np.arange(1, dim)), 1)
        for alpha in (0.4, -0.3 + 0.8j, 1.2j):
            direct = displaced_fock_matrix(alpha, dim)
            exponential = expm(alpha * a_op.conj().T - np.conj(alpha) * a_op)
            # interior elements are truncation-clean
            assert np.max(np.abs((direct - exponential)[:20, :20])) < 1e-9

    def test_first_column_is_coherent_state(self):
        alpha = 0.7 - 0.2j
        col = displaced_fock_matrix(alpha, 30)[:, 0]
        m = np.arange(30)
        expected = np.exp(-abs(alpha) ** 2 / 2) * alpha**m / np.sqrt(
            np.array([math.factorial(int(k)) for k in m], dtype=float)
        )
        assert np.max(np.abs(col - expected)) < 1e-12


class TestOracleWigner:
    def test_vacuum_peak(self):
        st = build_state(StateParams(n=0, mu=1.0, nu=0.0, r=0.0), 40)
        assert oracle_wigner_state(st, 0.0) == pytest.approx(1 / math.pi, rel=1e-12)
        assert oracle_wigner(st.density(), 0.0) == pytest.approx(1 / math.pi, rel=1e-12)

    def test_single_photon_center(self):
        st = build_state(StateParams(n=1, mu=0.0, nu=1.0, r=0.0), 40)
        assert oracle_wigner_state(st, 0.0) == pytest.approx(-1 / math.pi, rel=1e-12)

    def test_density_route_equals_state_route(self, rng):
        p = random_state(rng, n_max=2, weight_max=1.2)
        st = build_escalated(p)
        for alpha in (0.3 + 0.2j, -0.9j):
            assert oracle_wigner(st.density(), alpha) == pytest.approx(
                oracle_wigner_state(st, alpha), rel=1e-10, abs=1e-12
            )

    def test_cutoff_doubling_gate(self, rng):
        p = StateParams(n=2, mu=1.0, nu=1.0, r=0.3)
        st80 = build_state(p, 80)
        st160 = build_state(p, 160)
        for alpha in (0.0, 0.5 + 0.5j, -1.0 + 0.2j):
            a = oracle_wigner_state(st80, alpha)
            b = oracle_wigner_state(st160, alpha)
            assert abs(a - b) < 1e-9


class TestOracleQuadrature:
    def test_vacuum_gaussian(self):
        st = build_state(StateParams(n=0, mu=1.0, nu=0.0, r=0.0), 40)
        xs = np.linspace(-3, 3, 7)
        assert np.max(np.abs(oracle_quadrature(st, xs) - np.exp(-(xs**2)) / math.sqrt(math.pi))) < 1e-12

    def test_single_photon_profile(self):
        st = build_state(StateParams(n=1, mu=0.0, nu=1.0, r=0.0), 40)
        xs = np.linspace(-3, 3, 7)
        expected = 2 * xs**2 * np.exp(-(xs**2)) / math.sqrt(math.pi)
        assert np.max(np.abs(oracle_quadrature(st, xs) - expected)) < 1e-12


class TestMasterEquation:
    def test_zero_time_identity(self):
        st = build_state(StateParams(n=1, mu=1.0, nu=1.0, r=0.2), 40)
        rho = st.density()
        out = evolve_master_equation(rho, ReservoirParams(kappa_t=0.0, nbar=0.5, M=0.1), 0)
        assert np.array_equal(out.matrix, rho.matrix)

    def test_pure_loss_single_photon_decay(self):
        # nbar = M = 0: population of |1><1| decays as e^(-2 kappa t)
        amplitudes = np.zeros(41, dtype=complex)
        amplitudes[1] = 1.0
        rho = FockState(amplitudes, 40).density()
        for kt in (0.05, 0.2):
            out = evolve_master_equation(rho, ReservoirParams(kappa_t=kt, nbar=0.0, M=0.0), int(kt / 1e-4))
            assert out.matrix[1, 1].real == pytest.approx(math.exp(-2 * kt), rel=1e-9)
            assert out.matrix[0, 0].real == pytest.approx(1 - math.exp(-2 * kt), rel=1e-8)

    def test_trace_and_hermiticity_preserved(self, rng):
        # 100 random short evolutions at modest cutoff
        for _ in range(100):
            dim = 24
            vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            vec[dim // 2 :] *= np.exp(-np.arange(dim - dim // 2))
            vec /= np.linalg.norm(vec)
            rho = FockDensity(np.outer(vec, vec.conj()))
            nbar = float(rng.uniform(0, 1))
            m_lim = math.sqrt(nbar * (nbar + 1))
            m_corr = float(rng.uniform(0, m_lim)) if m_lim > 0 else 0.0
            out = evolve_master_equation(rho, ReservoirParams(kappa_t=0.005, nbar=nbar, M=m_corr), 50)
            assert out.trace_drift < 1e-6
            assert out.hermiticity_residue < 1e-10
            assert abs(np.trace(out.matrix) - 1.0) < 1e-9

    def test_step_ceiling_enforced(self):
        st = build_state(StateParams(n=0, mu=1.0, nu=0.0, r=0.1), 40)
        with pytest.raises(ValueError):
            evolve_master_equation(st.density(), ReservoirParams(kappa_t=0.1, nbar=0.0, M=0.0), 10)

    def test_validate_physicality(self):
        st = build_state(StateParams(n=0, mu=1.0, nu=0.0, r=0.1), 40)
        out = evolve_master_equation(st.density(), ReservoirParams(kappa_t=0.01, nbar=1.0, M=1.0), 100)
        out.validate()

    def test_thermalization_direction(self):
        # vacuum heats toward nbar under a thermal bath
        st = build_state(StateParams(n=0, mu=1.0, nu=0.0, r=0.0), 50)
        out = evolve_master_equation(st.density(), ReservoirParams(kappa_t=0.3, nbar=1.0, M=0.0), 3000)
        n_op = np.diag(np.arange(51, dtype=float))
        mean_n = float(np.trace(out.matrix @ n_op).real)
        expected = 1.0 * (1 - math.exp(-2 * 0.3))
        assert mean_n == pytest.approx(expected, rel=1e-6)
