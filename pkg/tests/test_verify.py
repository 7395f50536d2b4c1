import dataclasses
import math

import numpy as np
import pytest

from susy2 import Grid, OscillatorPotential, PoschlTellerPotential, pt_ground_state
from susy2.errors import BracketError
from susy2.grid import ComplexFunctionSamples, RealFunctionSamples
from susy2.verify import (ResidualReport, SpectrumResult, eta_ode_residual,
                          factorization_residual, intertwining_residual,
                          l2_norm, numerov_spectrum, operator_relation_residual,
                          riccati_residual, standard_reports)


class TestRiccatiResidual:
    def test_free_beta_exact(self, free_transform, free_energy, wide_grid):
        V, seed, tr = free_transform
        beta = ComplexFunctionSamples(wide_grid, -tr.alpha1.values)
        rep = riccati_residual(beta, V, free_energy.eps1, sign=+1)
        assert rep.passed
        assert rep.norm < 1e-12

    def test_alpha2_against_intermediate(self, pt_transform, pt_energy):
        _, tr = pt_transform
        rep = riccati_residual(tr.alpha2, tr.v1, np.conj(pt_energy.eps1), sign=-1)
        assert rep.passed

    def test_perturbation_detected(self, pt_transform, pt_energy, wide_grid):
        V, tr = pt_transform
        beta = ComplexFunctionSamples(wide_grid, -tr.alpha1.values + 1e-3)
        rep = riccati_residual(beta, V, pt_energy.eps1, sign=+1)
        assert not rep.passed


class TestEtaOdeResidual:
    def test_free_constants_cancel(self, free_transform):
        V, _, tr = free_transform
        # eta=-2k1: residual reduces to 8 k1^2 k2^2 + 2c = 0 identically
        rep = eta_ode_residual(tr, V)
        assert rep.passed
        assert rep.norm < 1e-9

    def test_pt_passes(self, pt_transform):
        V, tr = pt_transform
        assert eta_ode_residual(tr, V).passed

    def test_zero_eta_is_detected(self, pt_transform):
        # degenerate input: residual reduces to 2|c| != 0, check not vacuous
        V, tr = pt_transform
        broken = dataclasses.replace(
            tr, eta=RealFunctionSamples(tr.grid, np.zeros(tr.grid.n)))
        rep = eta_ode_residual(broken, V)
        assert not rep.passed
        assert rep.norm == pytest.approx(2 * abs(tr.energy.c))


class TestIntertwining:
    def test_free(self, free_transform):
        V, _, tr = free_transform
        assert intertwining_residual(V, tr.v_tilde, tr).passed

    def test_pt(self, pt_transform):
        V, tr = pt_transform
        assert intertwining_residual(V, tr.v_tilde, tr).passed

    def test_wrong_partner_fails(self, pt_transform):
        V, tr = pt_transform
        assert not intertwining_residual(V, V, tr).passed


class TestFactorization:
    def test_free_all_identities(self, free_transform):
        V, _, tr = free_transform
        for which in ("H", "H1_lower", "H1_upper", "Htilde"):
            assert factorization_residual(tr, V, tr.v_tilde, which).passed

    def test_pt_all_identities(self, pt_transform):
        V, tr = pt_transform
        for which in ("H", "H1_lower", "H1_upper", "Htilde"):
            assert factorization_residual(tr, V, tr.v_tilde, which).passed

    def test_lower_upper_same_intermediate(self, pt_transform, osc_property_case):
        """Both factorizations of H1 realize the same potential: compare
        alpha1' + alpha1^2 + eps with alpha2^2 - alpha2' + conj(eps), all
        derivatives analytic."""
        for V, tr in (pt_transform, osc_property_case[::2]):
            eps = tr.energy.eps1
            beta = -tr.alpha1.values
            beta_p = V.values - eps - beta ** 2
            v1_lower = -beta_p + tr.alpha1.values ** 2 + eps
            eta = tr.eta.values
            eta_p = eta ** 2 + 2 * eta * beta.real
            alpha2_p = beta_p + eta_p
            v1_upper = tr.alpha2.values ** 2 - alpha2_p + np.conj(eps)
            scale = 1 + np.max(np.abs(tr.v1.values))
            assert np.max(np.abs(v1_lower - v1_upper)) < 1e-8 * scale
            assert np.max(np.abs(v1_lower - tr.v1.values)) < 1e-8 * scale

    def test_unknown_identity(self, pt_transform):
        V, tr = pt_transform
        with pytest.raises(ValueError):
            factorization_residual(tr, V, tr.v_tilde, "bogus")


class TestOperatorRelation:
    def test_all_models(self, free_transform, pt_transform, osc_property_case):
        for V, tr in (free_transform[::2], pt_transform, osc_property_case[::2]):
            assert operator_relation_residual(tr, V).passed


class TestStandardReports:
    @pytest.mark.parametrize("case", ["free", "pt", "osc"])
    def test_full_bundle_passes(self, case, free_transform, pt_transform,
                                osc_property_case):
        V, tr = {"free": free_transform[::2], "pt": pt_transform,
                 "osc": osc_property_case[::2]}[case]
        reports = standard_reports(tr, V)
        assert len(reports) == 10
        failing = [r.name for r in reports if not r.passed]
        assert not failing, f"unexpected failures: {failing}"


class TestL2Norm:
    def test_zero(self, wide_grid):
        f = ComplexFunctionSamples(wide_grid, np.zeros(wide_grid.n, complex))
        assert l2_norm(f) == 0.0

    def test_pt_ground_state(self, wide_grid):
        assert l2_norm(pt_ground_state(1.0, wide_grid)) == pytest.approx(1.0, abs=1e-8)

    def test_gaussian(self, wide_grid):
        f = ComplexFunctionSamples(wide_grid, np.exp(-wide_grid.x ** 2 / 2))
        assert l2_norm(f) == pytest.approx(math.pi ** 0.25, rel=1e-12)


class TestNumerov:
    def test_oscillator_levels(self, osc_grid):
        V = RealFunctionSamples(osc_grid, OscillatorPotential().sample(osc_grid))
        result = numerov_spectrum(V, 6, (0.0, 13.0))
        for lv in result.levels:
            assert lv.energy == pytest.approx(2 * lv.index + 1, abs=1e-4)
            assert lv.node_count == lv.index

    def test_pt_single_bound_state(self, wide_grid):
        V = RealFunctionSamples(wide_grid, PoschlTellerPotential(1.0).sample(wide_grid))
        result = numerov_spectrum(V, 1, (-2.0, -1e-6))
        assert result.levels[0].energy == pytest.approx(-1.0, abs=1e-5)
        # exactly one state below the continuum threshold
        with pytest.raises(BracketError):
            numerov_spectrum(V, 2, (-2.0, -1e-6))

    def test_fourth_order_self_consistency(self):
        """Halving h moves each eigenvalue by less than 16x the claimed
        accuracy 1e-6 (1+|E|)."""
        coarse = Grid(-6.0, 6.0, 1001)
        fine = Grid(-6.0, 6.0, 2001)
        pot = OscillatorPotential()
        e_coarse = numerov_spectrum(RealFunctionSamples(coarse, pot.sample(coarse)),
                                    6, (0.0, 13.0))
        e_fine = numerov_spectrum(RealFunctionSamples(fine, pot.sample(fine)),
                                  6, (0.0, 13.0))
        for a, b in zip(e_coarse.levels, e_fine.levels):
            assert abs(a.energy - b.energy) < 16 * 1e-6 * (1 + abs(b.energy))

    def test_bracket_validation(self, osc_grid):
        V = RealFunctionSamples(osc_grid, OscillatorPotential().sample(osc_grid))
        with pytest.raises(BracketError):
            numerov_spectrum(V, 6, (0.0, 6.0))  # only 3 levels below 6
        with pytest.raises(ValueError):
            numerov_spectrum(V, 13, (0.0, 30.0))
        with pytest.raises(ValueError):
            numerov_spectrum(V, 1, (2.0, 1.0))

    def test_offset_bracket_keeps_global_indices(self, osc_grid):
        V = RealFunctionSamples(osc_grid, OscillatorPotential().sample(osc_grid))
        result = numerov_spectrum(V, 2, (4.0, 9.5))
        assert [lv.index for lv in result.levels] == [2, 3]
        assert result.levels[0].energy == pytest.approx(5.0, abs=1e-4)

    def test_spectrum_result_validation(self):
        from susy2.verify import Level
        with pytest.raises(ValueError):
            SpectrumResult(levels=[Level(0, 1.0, 0), Level(1, 0.5, 1)])
        with pytest.raises(ValueError):
            SpectrumResult(levels=[Level(0, 1.0, 1)])


class TestResidualReport:
    def test_pass_semantics(self):
        assert ResidualReport("x", 1e-7, 1e-6).passed
        assert not ResidualReport("x", 2e-6, 1e-6).passed
        d = ResidualReport("x", 1e-7, 1e-6).as_dict()
        assert d["pass"] is True
