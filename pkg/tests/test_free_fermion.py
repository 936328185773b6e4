import math

import numpy as np
import pytest

from orbent import entanglement as ent
from orbent import fock, free_fermion as ff, oracle, ssr
from orbent.errors import NotDisentangledWithinCapError

INV_PI = 1.0 / math.pi


class TestCorrelation:
    def test_half_filling_values(self):
        assert ff.correlation(0.5, 2) == pytest.approx(0.0, abs=1e-15)
        assert ff.correlation(0.5, 1) == pytest.approx(INV_PI, abs=1e-15)
        assert ff.correlation(0.5, 0) == 0.5

    def test_envelope_decay(self):
        for eta in (0.1, 0.37, 0.9):
            for distance in (5, 50, 500):
                assert abs(ff.correlation(eta, distance)) <= 1.0 / (math.pi * distance) + 1e-15

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            ff.correlation(0.0, 1)
        with pytest.raises(ValueError):
            ff.correlation(1.2, 1)
        with pytest.raises(ValueError):
            ff.correlation(0.5, -1)


class TestFiniteChain:
    def test_converges_to_thermodynamic_limit(self):
        value = ff.finite_chain_correlation(2000, 1000, 999, 1000)
        assert abs(value - INV_PI) < 1e-3

    def test_diagonal_is_occupation(self):
        c = ff.finite_chain_correlation_matrix(2, 1, "open")
        assert 0.0 <= c[0, 0] <= 1.0
        assert abs(np.trace(c) - 1.0) < 1e-12

    def test_overfilling_rejected(self):
        with pytest.raises(ValueError):
            ff.finite_chain_correlation_matrix(4, 5)

    def test_periodic_branch(self):
        c = ff.finite_chain_correlation_matrix(6, 3, "periodic")
        assert abs(np.trace(c) - 3.0) < 1e-12
        # translation invariance of the closed ring
        assert abs(c[0, 1] - c[2, 3]) < 1e-12


class TestTwoSiteRdm:
    def test_symmetries_at_half_filling(self):
        report = ssr.detect_symmetries(ff.two_site_rdm(0.5, 1))
        flags = report.to_dict()
        for name in ("number", "magnetization", "total_spin", "reflection",
                     "triplet_balance", "particle_hole_balance"):
            assert flags[name]["ok"], name

    def test_spin_flip_balance_any_filling(self):
        for eta in (0.17, 0.5, 0.83):
            for distance in (1, 2, 5):
                spec = ent.sector_spectrum(ff.two_site_rdm(eta, distance))
                assert abs(spec.weights[fock.TRIPLET_UP] - spec.weights[fock.TRIPLET_DOWN]) < 1e-14

    def test_matches_wick_construction(self):
        for eta in (0.2, 0.5, 0.65):
            for distance in (1, 3, 6):
                direct = ff.two_site_rdm(eta, distance)
                wick = oracle.wick_rdm_oracle(
                    ff.pair_correlation_modes(ff.correlation_block(eta, distance))
                )
                assert np.abs(direct.matrix - wick.matrix).max() < 1e-12

    def test_distance_zero_rejected(self):
        with pytest.raises(ValueError):
            ff.two_site_rdm(0.5, 0)


class TestEntanglementSeries:
    def test_half_filling_values(self):
        series = dict(ff.entanglement_vs_distance(0.5, 4))
        assert series[2] == 0.0
        # frozen against the Wick-oracle recomputation of this build
        assert series[1] == pytest.approx(0.045549554082, abs=1e-9)

    def test_nonnegative_with_exact_zeros(self):
        for eta in (0.3, 0.5, 0.7):
            for distance, value in ff.entanglement_vs_distance(eta, 10):
                assert value >= 0.0
                if ff.disentanglement_margin(eta, distance) > 1e-12:
                    assert value == 0.0

    def test_particle_hole_symmetry(self):
        left = ff.entanglement_vs_distance(0.25, 8)
        right = ff.entanglement_vs_distance(0.75, 8)
        for (_, a), (_, b) in zip(left, right):
            assert abs(a - b) < 1e-12

    def test_formula_matches_oracle_on_grid(self):
        worst = 0.0
        for eta in np.linspace(0.1, 0.9, 10):
            for distance in range(1, 6):
                spec = ent.sector_spectrum(ssr.nssr_project(ff.two_site_rdm(float(eta), distance)))
                formula = ent.nssr_entanglement_singlet(spec).value
                sol = oracle.kl_min_oracle(
                    oracle.ConstrainedSimplexProblem(spec.weights, "number")
                )
                worst = max(worst, abs(formula - sol.value))
        assert worst < 1e-8


class TestDisentanglingDistance:
    def test_half_filling(self):
        assert ff.disentangling_distance(0.5) == 2

    def test_leading_order_values(self):
        assert ff.lmin_leading_order(0.5) == pytest.approx(math.sqrt(2) * 4 / math.pi, abs=1e-12)
        assert ff.lmin_leading_order(0.1) == pytest.approx(math.sqrt(2) / (math.pi * 0.09), abs=1e-12)
        assert ff.lmin_leading_order(0.3) == pytest.approx(ff.lmin_leading_order(0.7), rel=1e-14)

    def test_symmetric_under_filling_flip(self):
        for eta in (0.15, 0.3, 0.45):
            assert ff.disentangling_distance(eta) == ff.disentangling_distance(1.0 - eta)

    def test_within_leading_order_band(self):
        for eta in np.arange(0.1, 0.95, 0.1):
            l_min = ff.disentangling_distance(float(eta))
            leading = ff.lmin_leading_order(float(eta))
            assert abs(l_min - leading) <= max(2.0, 0.3 * l_min)

    def test_reported_margins_are_positive(self):
        for eta in (0.1, 0.5, 0.8):
            l_min = ff.disentangling_distance(eta)
            cap = 4 * math.ceil(ff.lmin_leading_order(eta))
            for distance in range(l_min, cap + 1):
                assert ff.disentanglement_margin(eta, distance) > 1e-12

    def test_margin_agrees_with_formula_zero(self):
        for eta in (0.2, 0.5, 0.77):
            for distance in range(1, 12):
                value = ent.orbital_entanglement(ff.two_site_rdm(eta, distance), "number").value
                assert (value == 0.0) == (ff.disentanglement_margin(eta, distance) >= 0.0)

    def test_cap_validation(self):
        with pytest.raises(ValueError):
            ff.disentangling_distance(0.5, l_cap=3)

    def test_cap_exhaustion_reported(self):
        with pytest.raises(NotDisentangledWithinCapError):
            ff.disentangling_distance(0.5, margin_tol=10.0)


class TestGaussianPairState:
    def test_asymmetric_blocks(self):
        block_up = np.array([[0.42, 0.11], [0.11, 0.38]])
        block_dn = np.array([[0.55, -0.2], [-0.2, 0.61]])
        state = ff.gaussian_pair_state(block_up, block_dn)
        wick = oracle.wick_rdm_oracle(ff.pair_correlation_modes(block_up, block_dn))
        assert np.abs(state.matrix - wick.matrix).max() < 1e-12

    def test_rejects_unphysical_block(self):
        with pytest.raises(ValueError):
            ff.gaussian_pair_state(np.array([[1.4, 0.0], [0.0, 0.2]]))
