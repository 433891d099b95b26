import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qreadout import bounds as b
from qreadout import fock as f


class TestBinaryEntropy:
    def test_endpoints(self):
        assert b.binary_entropy(0.0) == 0.0
        assert b.binary_entropy(1.0) == 0.0
        assert b.binary_entropy(0.5) == 1.0

    def test_symmetry(self):
        assert b.binary_entropy(0.3) == pytest.approx(b.binary_entropy(0.7))

    def test_range(self):
        with pytest.raises(ValueError):
            b.binary_entropy(1.2)


class TestMemorySpec:
    def test_swap_normalization(self):
        mem = b.MemorySpec(0.9, 0.2)
        assert (mem.r0, mem.r1) == (0.2, 0.9)
        assert mem.swapped

    def test_validation(self):
        with pytest.raises(ValueError):
            b.MemorySpec(0.5, 1.2)
        with pytest.raises(ValueError):
            b.MemorySpec(0.5, 1.0, nbar=-1.0)
        with pytest.raises(ValueError):
            b.MemorySpec(0.5, 1.0, m_star=0)

    def test_transmitter_validation(self):
        with pytest.raises(ValueError):
            b.TransmitterSpec(0, 1.0)
        with pytest.raises(ValueError):
            b.TransmitterSpec(5, 0.0)
        assert b.TransmitterSpec(4, 2.0).n_s == 0.5


class TestClassicalBound:
    def test_equal_reflectivities(self):
        assert b.classical_bound(10.0, 0.4, 0.4) == pytest.approx(0.5)

    def test_zero_energy(self):
        assert b.classical_bound(0.0, 0.2, 0.9) == pytest.approx(0.5)

    def test_closed_form_value(self):
        # N = ln 2, r0 = 0, r1 = 1: (1 - sqrt(1/2)) / 2
        expected = (1.0 - math.sqrt(0.5)) / 2.0
        assert b.classical_bound(math.log(2.0), 0.0, 1.0) == \
            pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.146447, abs=1e-6)

    @settings(max_examples=50, deadline=None)
    @given(n=st.floats(0.0, 50.0), r0=st.floats(0.0, 1.0), r1=st.floats(0.0, 1.0))
    def test_swap_symmetry(self, n, r0, r1):
        assert b.classical_bound(n, r0, r1) == b.classical_bound(n, r1, r0)


class TestDecoherentClassicalBound:
    @pytest.mark.parametrize("m_c", [1, 10, 1000])
    @pytest.mark.parametrize("n", [1.0, 30.0])
    @pytest.mark.parametrize("rs", [(0.2, 0.9), (0.85, 1.0)])
    def test_noiseless_reduction(self, m_c, n, rs):
        mem = b.MemorySpec(*rs)
        assert b.classical_bound_decoherent(m_c, n, mem) == pytest.approx(
            b.classical_bound(n, *rs), abs=1e-12)

    def test_equal_reflectivities_any_noise(self):
        mem = b.MemorySpec(0.6, 0.6, nbar=0.3, eps=0.1)
        assert b.classical_bound_decoherent(17, 4.0, mem) == pytest.approx(0.5)

    def test_monotone_in_bandwidth(self):
        mem = b.MemorySpec(0.85, 1.0, nbar=1e-5, eps=1e-5)
        values = [b.classical_bound_decoherent(m_c, 30.0, mem)
                  for m_c in (1, 10, 10**3, 10**6)]
        assert all(a >= c - 1e-15 for a, c in zip(values, values[1:]))


class TestEprQcb:
    def test_equal_reflectivities(self):
        q, _ = b.epr_qcb(b.TransmitterSpec(3, 1.0), b.MemorySpec(0.4, 0.4))
        assert q == 0.5

    def test_single_copy_matches_fock(self):
        mem = b.MemorySpec(0.4, 1.0)
        q, _ = b.epr_qcb(b.TransmitterSpec(1, 0.5), mem)
        rho0 = f.apply_pure_loss_fock(f.tmsv_fock(0.5), 0, 0.4)
        rho1 = f.tmsv_fock(0.5)
        q_fock, _ = f.qcb_fock(rho0, rho1)
        assert q == pytest.approx(0.5 * q_fock, abs=1e-6)

    def test_monotone_in_energy(self):
        mem = b.MemorySpec(0.5, 0.95)
        qs = [b.epr_qcb(b.TransmitterSpec(10, n), mem)[0] for n in (1.0, 5.0, 30.0)]
        assert qs[0] > qs[1] > qs[2]

    def test_swap_invariance(self):
        tx = b.TransmitterSpec(5, 2.0)
        q_a, _ = b.epr_qcb(tx, b.MemorySpec(0.3, 0.8))
        q_b, _ = b.epr_qcb(tx, b.MemorySpec(0.8, 0.3))
        assert q_a == pytest.approx(q_b, rel=1e-9)


class TestThresholdEnergy:
    def test_extreme_memory(self):
        assert b.threshold_energy(0.0, 1.0) == pytest.approx(
            2.0 * math.log(2.0), rel=1e-14)

    def test_high_reflectivity_memory(self):
        assert b.threshold_energy(0.84, 1.0) == pytest.approx(
            2.0 * math.log(2.0) / 0.16, rel=1e-12)

    def test_degenerate_memory_rejected(self):
        with pytest.raises(ValueError):
            b.threshold_energy(0.7, 0.7)


class TestInfoGain:
    def test_equal_reflectivities(self):
        assert b.info_gain(b.TransmitterSpec(3, 2.0), b.MemorySpec(0.5, 0.5)) == 0.0

    def test_high_reflectivity_gain(self):
        g = b.info_gain(b.TransmitterSpec(30, 30.0), b.MemorySpec(0.85, 1.0))
        assert g > 0.5
        # pinned regression value from this pipeline
        assert g == pytest.approx(0.826677, abs=1e-4)

    def test_decoherent_gain_positive(self):
        mem = b.MemorySpec(0.85, 1.0, nbar=1e-5, eps=1e-5, m_star=5 * 10**6)
        assert b.info_gain(b.TransmitterSpec(30, 30.0), mem) > 0.0

    def test_gain_bounded_by_quantum_entropy(self):
        for rs in [(0.3, 0.9), (0.85, 1.0), (0.0, 0.5)]:
            mem = b.MemorySpec(*rs)
            rep = b.bound_report(mem, 10.0, M=10)
            assert rep.G <= 1.0
            assert rep.G <= 1.0 - b.binary_entropy(rep.Q) + 1e-12

    def test_conclusive_iff_gain_positive(self):
        for rs, n in [((0.2, 0.9), 3.0), ((0.85, 1.0), 30.0), ((0.4, 0.5), 1.0)]:
            rep = b.bound_report(b.MemorySpec(*rs), n, M=10)
            assert rep.conclusive == (rep.Q < rep.C)
            if rep.conclusive:
                assert rep.G > 0.0


class TestBandwidthSearch:
    def test_theorem_two_sample(self):
        mem = b.MemorySpec(0.2, 0.9)
        n = 2.0 * b.threshold_energy(0.2, 0.9)
        res = b.find_min_bandwidth(n, mem)
        assert res.found
        assert res.Q < res.C
        # minimality: one fewer copy must not beat the bound
        if res.m_bar > 1:
            q_prev, _ = b.epr_qcb(b.TransmitterSpec(res.m_bar - 1, n), mem)
            assert q_prev >= res.C

    def test_degenerate_memory_not_found(self):
        res = b.find_min_bandwidth(1.0, b.MemorySpec(0.5, 0.5), m_cap=64)
        assert not res.found
        assert res.m_bar is None

    def test_ideal_memory_low_energy(self):
        res = b.find_min_bandwidth(0.6, b.MemorySpec(0.3, 1.0))
        assert res.found


class TestInfiniteBandwidth:
    def test_equal_reflectivities(self):
        q, _ = b.qcb_infinite_bandwidth(1.0, b.MemorySpec(0.4, 0.4))
        assert q == 0.5

    def test_monotone_in_bandwidth(self):
        mem = b.MemorySpec(0.5, 1.0)
        qs = [b.epr_qcb(b.TransmitterSpec(m, 1.0), mem)[0]
              for m in (1, 2, 4, 8, 16)]
        assert all(a >= c - 1e-12 for a, c in zip(qs, qs[1:]))
        q_inf, _ = b.qcb_infinite_bandwidth(1.0, mem)
        assert q_inf <= qs[-1] + 1e-9

    def test_ideal_memory_conclusive(self):
        for r0 in np.arange(0.0, 0.95, 0.1):
            mem = b.MemorySpec(float(r0), 1.0)
            q, _ = b.qcb_infinite_bandwidth(0.6, mem)
            assert q < b.classical_bound(0.6, float(r0), 1.0)


class TestEccOverhead:
    def test_perfect_readout(self):
        assert b.ecc_overhead(0.0) == 1.0

    def test_useless_readout(self):
        assert b.ecc_overhead(0.5) == math.inf
        assert b.ecc_overhead(0.5 - 1e-12) > 1e10

    def test_range(self):
        with pytest.raises(ValueError):
            b.ecc_overhead(-0.1)
        with pytest.raises(ValueError):
            b.ecc_overhead(0.7)

    def test_example_value(self):
        assert b.ecc_overhead(0.11) == pytest.approx(
            1.0 / (1.0 - b.binary_entropy(0.11)), rel=1e-14)
