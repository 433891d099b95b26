import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qreadout import gaussian as g
from qreadout import fock as f


class TestTmsv:
    def test_zero_squeezing_is_two_vacua(self):
        state = g.tmsv_state(0.0)
        assert np.allclose(state.cov, np.eye(4))
        assert np.allclose(state.mean, 0.0)

    def test_blocks_at_ns_one(self):
        state = g.tmsv_state(1.0)
        c = 2.0 * math.sqrt(2.0)
        assert np.allclose(np.diag(state.cov), 3.0)
        assert state.cov[0, 2] == pytest.approx(c)
        assert state.cov[1, 3] == pytest.approx(-c)
        nus = g.symplectic_eigenvalues(state).eigenvalues
        assert max(abs(nu - 1.0) for nu in nus) < 1e-9

    @pytest.mark.parametrize("n_s", [0.0, 0.1, 1.0, 10.0, 100.0])
    def test_purity(self, n_s):
        state = g.tmsv_state(n_s)
        assert np.linalg.det(state.cov) == pytest.approx(1.0, abs=1e-6)
        assert g.symplectic_eigenvalues(state).is_pure()

    def test_negative_energy_rejected(self):
        with pytest.raises(ValueError):
            g.tmsv_state(-0.1)


class TestChannels:
    def test_lossless_is_identity(self):
        ch = g.pure_loss(1.0)
        assert ch.scale == 1.0 and ch.added_noise == 0.0

    def test_thermal_loss_reduces_to_pure_loss(self):
        assert g.thermal_loss(0.37, 0.0) == g.pure_loss(0.37)

    def test_zero_noise_is_identity(self):
        ch = g.add_noise(0.0)
        assert ch.scale == 1.0 and ch.added_noise == 0.0

    @pytest.mark.parametrize("bad", [-0.1, 1.1])
    def test_reflectivity_range(self, bad):
        with pytest.raises(ValueError):
            g.pure_loss(bad)
        with pytest.raises(ValueError):
            g.thermal_loss(bad, 0.0)

    def test_unphysical_channel_rejected(self):
        with pytest.raises(ValueError):
            g.BosonicChannel(scale=0.5, added_noise=0.1)

    def test_vacuum_fixed_by_loss(self):
        out = g.apply_channel(g.vacuum_state(1), 0, g.pure_loss(0.3))
        assert np.allclose(out.cov, np.eye(2))
        assert np.allclose(out.mean, 0.0)

    def test_lossy_tmsv_blocks(self):
        n_s, r = 0.7, 0.4
        out = g.apply_channel(g.tmsv_state(n_s), 0, g.pure_loss(r))
        c = 2.0 * math.sqrt(n_s * (n_s + 1.0))
        assert out.cov[0, 0] == pytest.approx(2.0 * r * n_s + 1.0)
        assert out.cov[0, 2] == pytest.approx(math.sqrt(r) * c)
        assert out.cov[2, 2] == pytest.approx(2.0 * n_s + 1.0)

    def test_loss_composition(self):
        state = g.tmsv_state(0.5)
        twice = g.apply_channel(
            g.apply_channel(state, 0, g.pure_loss(0.8)), 0, g.pure_loss(0.6))
        once = g.apply_channel(state, 0, g.pure_loss(0.48))
        assert np.allclose(twice.cov, once.cov, atol=1e-14)

    def test_compose_matches_sequential(self):
        ch = g.add_noise(0.2).compose(g.thermal_loss(0.5, 1.0))
        seq = g.apply_channel(
            g.apply_channel(g.tmsv_state(1.0), 0, g.thermal_loss(0.5, 1.0)),
            0, g.add_noise(0.2))
        direct = g.apply_channel(g.tmsv_state(1.0), 0, ch)
        assert np.allclose(seq.cov, direct.cov)

    def test_mode_out_of_range(self):
        with pytest.raises(ValueError):
            g.apply_channel(g.vacuum_state(1), 1, g.pure_loss(0.5))

    @settings(max_examples=50, deadline=None)
    @given(
        r=st.floats(0.0, 1.0),
        nbar=st.floats(0.0, 3.0),
        eps=st.floats(0.0, 1.0),
        n_s=st.floats(0.0, 5.0),
    )
    def test_physicality_preserved(self, r, nbar, eps, n_s):
        state = g.tmsv_state(n_s)
        state = g.apply_channel(state, 0, g.add_noise(eps))
        state = g.apply_channel(state, 0, g.thermal_loss(r, nbar))
        state = g.apply_channel(state, 1, g.add_noise(2.0 * eps))
        nus = g.symplectic_eigenvalues(state).eigenvalues
        assert min(nus) >= 1.0 - 1e-9


class TestSymplecticSpectrum:
    def test_vacuum(self):
        assert g.symplectic_eigenvalues(g.vacuum_state(2)).eigenvalues == (1.0, 1.0)

    def test_thermal(self):
        th = g.GaussianState(1, np.zeros(2), 5.0 * np.eye(2))
        assert g.symplectic_eigenvalues(th).eigenvalues[0] == pytest.approx(5.0)

    def test_lossy_tmsv_determinant_identity(self):
        out = g.apply_channel(g.tmsv_state(0.8), 0, g.pure_loss(0.35))
        nu_p, nu_m = g.symplectic_eigenvalues(out).eigenvalues
        assert nu_p * nu_m == pytest.approx(
            math.sqrt(np.linalg.det(out.cov)), rel=1e-10)

    def test_nonsymmetric_cov_rejected(self):
        cov = np.eye(2)
        cov[0, 1] = 1e-6
        with pytest.raises(ValueError):
            g.GaussianState(1, np.zeros(2), cov)

    def test_unphysical_cov_rejected(self):
        with pytest.raises(ValueError):
            g.GaussianState(1, np.zeros(2), 0.5 * np.eye(2))


class TestOverlap:
    def test_vacuum_with_vacuum(self):
        assert g.gaussian_overlap(g.vacuum_state(1), g.vacuum_state(1)) == \
            pytest.approx(1.0)

    def test_coherent_closed_form(self):
        a, b = g.coherent_state(0.3), g.coherent_state(0.9)
        assert g.gaussian_overlap(a, b) == pytest.approx(
            math.exp(-abs(0.3 - 0.9) ** 2), rel=1e-12)

    def test_coherent_against_fock(self):
        a, b = g.coherent_state(0.3), g.coherent_state(0.9)
        fa, fb = f.coherent_fock(0.3, 40), f.coherent_fock(0.9, 40)
        brute = float(np.sum(fa.matrix * fb.matrix))
        assert g.gaussian_overlap(a, b) == pytest.approx(brute, abs=1e-6)

    def test_symmetry(self):
        a = g.apply_channel(g.tmsv_state(0.5), 0, g.pure_loss(0.4))
        b = g.tmsv_state(0.5)
        assert g.gaussian_overlap(a, b) == pytest.approx(
            g.gaussian_overlap(b, a), rel=1e-14)

    def test_mode_mismatch(self):
        with pytest.raises(ValueError):
            g.gaussian_overlap(g.vacuum_state(1), g.vacuum_state(2))


class TestChernoffQuantity:
    def test_pure_idempotence(self):
        state = g.tmsv_state(0.5)
        for t in (0.2, 0.5, 0.8):
            assert g.qcb_overlap_t(state, state, t) == pytest.approx(1.0, abs=1e-10)

    def test_t_range(self):
        state = g.vacuum_state(1)
        for t in (0.0, 1.0, -0.2):
            with pytest.raises(ValueError):
                g.qcb_overlap_t(state, state, t)

    def test_vacuum_vs_thermal_closed_form(self):
        # Tr(rho0^t rho1^(1-t)) = (2/(nu+1))^(1-t) when rho0 is vacuum
        nu = 3.0
        th = g.GaussianState(1, np.zeros(2), nu * np.eye(2))
        for t in (0.1, 0.5, 0.9):
            expected = (2.0 / (nu + 1.0)) ** (1.0 - t)
            assert g.qcb_overlap_t(g.vacuum_state(1), th, t) == \
                pytest.approx(expected, rel=1e-12)

    def test_matches_fock_oracle_midpoint(self):
        n_s, r = 0.5, 0.4
        a = g.apply_channel(g.tmsv_state(n_s), 0, g.pure_loss(r))
        b = g.tmsv_state(n_s)
        pair = f.ChernoffPairFock(
            f.apply_pure_loss_fock(f.tmsv_fock(n_s), 0, r), f.tmsv_fock(n_s))
        assert g.qcb_overlap_t(a, b, 0.5) == pytest.approx(pair.q_t(0.5), abs=1e-6)

    def test_qcb_identical_states(self):
        state = g.apply_channel(g.tmsv_state(0.5), 0, g.thermal_loss(0.6, 0.5))
        q, _ = g.qcb(state, state)
        assert q == pytest.approx(1.0, abs=1e-9)

    def test_qcb_is_grid_minimum(self):
        a = g.apply_channel(g.tmsv_state(0.5), 0, g.pure_loss(0.4))
        b = g.tmsv_state(0.5)
        q, _ = g.qcb(a, b)
        for t in np.linspace(1e-4, 1 - 1e-4, 21):
            assert q <= g.qcb_overlap_t(a, b, t) + 1e-12

    def test_qcb_matches_fock_minimum(self):
        n_s, r = 0.5, 0.4
        a = g.apply_channel(g.tmsv_state(n_s), 0, g.pure_loss(r))
        b = g.tmsv_state(n_s)
        q_f, _ = f.qcb_fock(
            f.apply_pure_loss_fock(f.tmsv_fock(n_s), 0, r), f.tmsv_fock(n_s))
        q_g, _ = g.qcb(a, b)
        assert q_g == pytest.approx(q_f, abs=1e-6)

    def test_qcb_symmetry(self):
        a = g.apply_channel(g.tmsv_state(0.5), 0, g.thermal_loss(0.4, 0.2))
        b = g.apply_channel(g.tmsv_state(0.5), 0, g.pure_loss(0.9))
        q_ab, t_ab = g.qcb(a, b)
        q_ba, t_ba = g.qcb(b, a)
        assert q_ab == pytest.approx(q_ba, abs=1e-9)
        assert t_ab == pytest.approx(1.0 - t_ba, abs=1e-4)


class TestFidelity:
    def test_identical_mixed(self):
        th = g.GaussianState(1, np.array([0.4, -0.2]), 2.5 * np.eye(2))
        assert g.gaussian_fidelity_1mode(th, th) == pytest.approx(1.0, rel=1e-12)

    def test_coherent_states(self):
        a, b = g.coherent_state(0.2), g.coherent_state(1.1)
        assert g.gaussian_fidelity_1mode(a, b) == pytest.approx(
            math.exp(-abs(0.2 - 1.1) ** 2), rel=1e-12)
        fa, fb = f.coherent_fock(0.2, 40), f.coherent_fock(1.1, 40)
        assert g.gaussian_fidelity_1mode(a, b) == pytest.approx(
            f.fidelity_fock(fa, fb), abs=1e-6)

    def test_vacuum_vs_thermal(self):
        nbar = 1.7
        th = g.GaussianState(1, np.zeros(2), (2 * nbar + 1) * np.eye(2))
        assert g.gaussian_fidelity_1mode(g.vacuum_state(1), th) == \
            pytest.approx(1.0 / (1.0 + nbar), rel=1e-12)

    def test_multimode_rejected(self):
        with pytest.raises(ValueError):
            g.gaussian_fidelity_1mode(g.vacuum_state(2), g.vacuum_state(2))
