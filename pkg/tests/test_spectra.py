import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from mlsbath.spectra import (
    Correlator,
    Lorentzian,
    PowerGaussian,
    Rectangular,
    area,
    correlator,
    correlator_table,
    evaluate,
    support,
)

RECT_CASES = [Rectangular(5.0, 2.0, 1.0), Rectangular(50.0, 1.5, 1.0), Rectangular(5.0, 0.0, 1.0)]
LOR_CASES = [Lorentzian(5.0, 2.0, 1.0), Lorentzian(50.0, 1.5, 1.0), Lorentzian(5.0, 1.5, 0.5)]


class TestEvaluate:
    def test_rectangular_height(self):
        assert evaluate(Rectangular(5.0, 2.0, 1.0), 2.0) == 2.5  # area/(2*half_width)

    def test_rectangular_outside_support(self):
        m = Rectangular(5.0, 2.0, 1.0)
        assert evaluate(m, 3.5) == 0.0
        assert evaluate(m, 0.5) == 0.0

    def test_lorentzian_peak(self):
        m = Lorentzian(5.0, 2.0, 1.0)
        assert evaluate(m, 2.0) == pytest.approx(5.0 / math.pi, rel=1e-14)

    def test_power_gaussian_at_cutoff(self):
        # direct substitution: amp * (1)^(1+nu) * exp(-1/4) at omega = cutoff
        m = PowerGaussian(2.0, 0.0, 1.0)
        assert evaluate(m, 1.0) == pytest.approx(m.amplitude * math.exp(-0.25), rel=1e-14)

    def test_power_gaussian_negative_frequency(self):
        m = PowerGaussian(2.0, -1.0, 1.0)
        assert evaluate(m, -0.5) == 0.0

    def test_vectorized(self):
        m = Rectangular(5.0, 2.0, 1.0)
        out = evaluate(m, np.array([1.5, 3.5]))
        assert out.tolist() == [2.5, 0.0]


class TestArea:
    def test_stored_area_returned(self):
        assert area(Rectangular(50.0, 2.0, 1.0)) == 50.0
        assert area(Lorentzian(5.0, 2.0, 1.0)) == 5.0

    def test_power_gaussian_unit_amplitude_anchor(self):
        # quadrature oracle: integral of omega*exp(-omega^2/4) over [0, inf) is 2,
        # so requesting area 2 at nu=0, cutoff=1 must set the amplitude to 1
        val, _ = quad(lambda w: w * np.exp(-(w**2) / 4.0), 0, np.inf)
        assert val == pytest.approx(2.0, rel=1e-12)
        assert PowerGaussian(2.0, 0.0, 1.0).amplitude == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("nu", [-1.0, -0.5, 0.0, 1.0, 2.0])
    @pytest.mark.parametrize("cutoff", [0.5, 1.0, 2.0])
    def test_power_gaussian_closed_form_vs_quadrature(self, nu, cutoff):
        m = PowerGaussian(7.0, nu, cutoff)
        val, _ = quad(lambda w: evaluate(m, w), 0, np.inf)
        assert val == pytest.approx(area(m), rel=1e-6)
        assert area(m) == pytest.approx(7.0, rel=1e-12)

    def test_rectangular_quadrature_matches_area(self):
        m = Rectangular(5.0, 2.0, 1.0)
        val, _ = quad(lambda w: evaluate(m, w), *support(m))
        assert val == pytest.approx(5.0, rel=1e-6)

    def test_divergent_ohmicity_rejected(self):
        with pytest.raises(ValueError, match="ohmicity"):
            PowerGaussian(1.0, -2.0, 1.0)

    def test_invalid_parameters_rejected(self):
        with pytest.raises(ValueError):
            Rectangular(-1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            Rectangular(1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            Lorentzian(1.0, 0.0, -0.5)
        with pytest.raises(ValueError):
            PowerGaussian(1.0, 0.0, 0.0)


class TestCorrelatorAnalytic:
    def test_negative_tau_is_zero(self):
        for m in (RECT_CASES[0], LOR_CASES[0], PowerGaussian(5.0, 0.0, 1.0)):
            assert correlator(Correlator(m), -1.0) == 0.0

    def test_zero_tau_is_area(self):
        for m in RECT_CASES + LOR_CASES:
            assert correlator(Correlator(m), 0.0) == pytest.approx(m.area, rel=1e-14)

    def test_rectangular_closed_form(self):
        m = Rectangular(5.0, 2.0, 1.0)
        tau = 1.3
        expected = 5.0 * cmath.exp(2j * tau) * math.sin(tau) / tau
        assert correlator(Correlator(m), tau) == pytest.approx(expected, abs=1e-14)

    def test_lorentzian_closed_form(self):
        # residue of the Lorentzian pole in the upper half plane
        m = Lorentzian(5.0, 2.0, 1.0)
        expected = 5.0 * cmath.exp(2j) * math.exp(-1.0)
        assert correlator(Correlator(m), 1.0) == pytest.approx(expected, abs=1e-14)

    def test_rectangular_centered_is_real(self):
        c = Correlator(Rectangular(5.0, 0.0, 1.0))
        for tau in np.linspace(0.0, 5.0, 23):
            assert abs(correlator(c, tau).imag) < 1e-14

    def test_magnitude_bounded_by_area(self):
        for m in RECT_CASES + LOR_CASES:
            c = Correlator(m)
            for tau in np.linspace(0.01, 6.0, 40):
                assert abs(correlator(c, tau)) <= m.area * (1 + 1e-12)

    def test_lorentzian_magnitude_monotone(self):
        c = Correlator(Lorentzian(5.0, 2.0, 1.0))
        taus = np.linspace(0.0, 4.0, 41)
        mags = [abs(correlator(c, t)) for t in taus]
        assert np.all(np.diff(mags) < 0)

    def test_equal_area_equal_start(self):
        # shape-independence precondition: F(0+) depends only on the area
        models = [Rectangular(5.0, 2.0, 0.3), Lorentzian(5.0, 7.0, 2.0), PowerGaussian(5.0, 1.0, 0.5)]
        starts = [correlator(Correlator(m), 0.0) for m in models]
        assert starts[0] == pytest.approx(starts[1], rel=1e-12)
        assert starts[0] == pytest.approx(starts[2], rel=1e-12)


class TestCorrelatorQuadrature:
    @pytest.mark.parametrize("m", RECT_CASES + LOR_CASES)
    @pytest.mark.parametrize("tau", [0.01, 0.1, 1.0, 2.5])
    def test_matches_analytic(self, m, tau):
        analytic = correlator(Correlator(m, method="analytic"), tau)
        numeric = correlator(Correlator(m, method="quadrature"), tau)
        assert abs(analytic - numeric) < 1e-8

    def test_power_gaussian_start_matches_area(self):
        for nu in (-1.0, 0.0, 1.0):
            m = PowerGaussian(5.0, nu, 1.0)
            c = Correlator(m, method="quadrature")
            assert correlator(c, 1e-6).real == pytest.approx(5.0, rel=1e-6)

    def test_analytic_method_rejected_for_power_gaussian(self):
        with pytest.raises(ValueError, match="analytic"):
            Correlator(PowerGaussian(5.0, 0.0, 1.0), method="analytic")

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError, match="method"):
            Correlator(RECT_CASES[0], method="magic")


class TestCorrelatorTable:
    def test_grid_and_first_entry(self):
        m = Rectangular(5.0, 2.0, 1.0)
        table = correlator_table(Correlator(m), t_max=0.5, dt=0.1)
        assert table.shape == (6,)
        assert table[0] == pytest.approx(5.0, rel=1e-14)

    def test_matches_pointwise_correlator(self):
        m = Lorentzian(5.0, 1.5, 1.0)
        c = Correlator(m)
        table = correlator_table(c, t_max=1.0, dt=0.05)
        for k, val in enumerate(table):
            assert val == pytest.approx(correlator(c, k * 0.05), abs=1e-14)

    @pytest.mark.parametrize("m", [RECT_CASES[0], LOR_CASES[0]])
    def test_analytic_vs_quadrature_tables(self, m):
        ta = correlator_table(Correlator(m, method="analytic"), t_max=2.5, dt=0.25)
        tq = correlator_table(Correlator(m, method="quadrature"), t_max=2.5, dt=0.25)
        assert np.max(np.abs(ta - tq)) < 1e-8

    def test_invalid_grid_rejected(self):
        c = Correlator(RECT_CASES[0])
        with pytest.raises(ValueError):
            correlator_table(c, t_max=1.0, dt=0.0)
        with pytest.raises(ValueError):
            correlator_table(c, t_max=0.05, dt=0.1)
