import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import signal

from protectosim import continuum, core
from protectosim.core import MeasurementGeometry
from protectosim.errors import RegimeWarning, SingularPoint, ZeroWidth

TRANSVERSE = MeasurementGeometry(math.pi / 2, 0.0, 0.1)


def p1_by_trapezoid(s_d, xi=0.1, n=400_001):
    # Flip probability at gamma = pi/2, eta = 0, written out from the geometry.
    b = np.linspace(-14 * s_d, 14 * s_d, n)
    w = np.exp(-(b**2) / (2 * s_d**2)) / math.sqrt(2 * math.pi * s_d**2)
    sin2 = (xi**2 + b**2 + 2 * b * xi) / (1 + b**2 + xi**2 + 2 * b * xi)
    return 0.5 * np.trapezoid(w * sin2, b)


@pytest.fixture(autouse=True)
def _quiet_regime():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        yield


class TestSpectralDensity:
    def test_peak(self):
        assert continuum.spectral_density(0.0, 1.0) == pytest.approx(0.39894, abs=5e-6)

    def test_symmetric_and_normalized(self):
        b = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(continuum.spectral_density(b, 0.4), continuum.spectral_density(-b, 0.4))
        w = continuum.SpectralDensity(0.4)
        assert w.expectation(lambda x: np.ones_like(x)) == pytest.approx(1.0, abs=1e-9)
        x = np.linspace(-6, 6, 20001)
        assert np.trapezoid(w(x), x) == pytest.approx(1.0, abs=1e-9)

    def test_zero_width(self):
        with pytest.raises(ZeroWidth):
            continuum.spectral_density(0.0, 0.0)


class TestP1Weak:
    def test_zero_width_short_circuit(self):
        assert continuum.p1_weak(0.0, TRANSVERSE) == pytest.approx(0.0049504950495049506, rel=1e-13)

    @pytest.mark.parametrize("s_d", [0.1, 0.2, 0.35, 1.0, 3.0])
    def test_against_trapezoid_oracle(self, s_d):
        assert continuum.p1_weak(s_d, TRANSVERSE) == pytest.approx(p1_by_trapezoid(s_d), rel=1e-7)

    def test_frozen_oracle_values(self):
        assert continuum.p1_weak(0.2, TRANSVERSE) == pytest.approx(0.022015162429469614, rel=1e-8)
        assert continuum.p1_weak(0.35, TRANSVERSE) == pytest.approx(0.04955056344323028, rel=1e-8)
        assert continuum.p1_weak(1.0, TRANSVERSE) == pytest.approx(0.17293746778309582, rel=1e-8)

    def test_quoted_values(self):
        assert continuum.p1_weak(1.0, TRANSVERSE) == pytest.approx(0.17, abs=0.01)
        assert continuum.p1_weak(0.2, TRANSVERSE) == pytest.approx(0.02, abs=0.005)
        assert continuum.p1_weak(0.35, TRANSVERSE) == pytest.approx(0.05, abs=0.01)

    def test_strong_decoherence_approaches_half(self):
        v = continuum.p1_weak(10.0, TRANSVERSE)
        assert 0.43 < v < 0.5
        assert continuum.p1_weak(100.0, TRANSVERSE) > v

    def test_monotone_on_grid(self):
        vals = [continuum.p1_weak(s, TRANSVERSE) for s in np.arange(0, 3.01, 0.1)]
        assert np.all(np.diff(vals) >= 0.0)

    @given(st.floats(0, 20), st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True),
           st.floats(0, 0.9))
    @settings(max_examples=60, deadline=None)
    def test_range(self, s_d, g, e, xi):
        v = continuum.p1_weak(s_d, MeasurementGeometry(g, e, xi))
        assert 0.0 <= v <= 0.5

    def test_negative_width(self):
        with pytest.raises(ValueError):
            continuum.p1_weak(-0.1, TRANSVERSE)


class TestP1Full:
    def test_zero_width_reduces_to_single_branch(self):
        s2 = 0.01 / 1.01
        gam = core.wavepacket_overlap(0.0, 0.03)
        for w in (0.5, math.pi, 10.0, 200 * math.pi):
            assert continuum.p1_full(0.0, TRANSVERSE, w, 0.03) == pytest.approx(
                0.5 * s2 * (1 - gam * math.cos(w)), abs=1e-14
            )

    def test_bound_at_worst_phase(self):
        # Unit overlap and cos = -1 saturates sin^2(theta).
        v = continuum.p1_full(0.0, TRANSVERSE, math.pi, 0.03)
        assert v == pytest.approx(core.disturbance_bound(0.1, math.pi / 2), rel=1e-12)

    def test_full_against_dense_trapezoid(self):
        s_d, w0, sp = 0.2, 200 * math.pi, 0.03
        b = np.linspace(-12 * s_d, 12 * s_d, 2_000_001)
        wts = np.exp(-(b**2) / (2 * s_d**2)) / math.sqrt(2 * math.pi * s_d**2)
        sin2 = (0.01 + b**2 + 0.2 * b) / (1.01 + b**2 + 0.2 * b)
        shift = b / np.sqrt(1 + b**2)
        overlap = np.exp(-(shift**2) / (2 * sp**2))
        ref = 0.5 * np.trapezoid(wts * sin2 * (1 - overlap * np.cos(w0 * np.sqrt(1 + b**2))), b)
        assert continuum.p1_full(s_d, TRANSVERSE, w0, sp) == pytest.approx(ref, rel=1e-7)

    def test_modes_close_to_weak_for_long_times(self):
        weak = continuum.p1_weak(0.2, TRANSVERSE)
        for mode in ("full", "average"):
            assert continuum.p1_full(0.2, TRANSVERSE, 200 * math.pi, 0.03, mode) == pytest.approx(
                weak, abs=1e-3
            )
        assert continuum.p1_full(0.2, TRANSVERSE, 200 * math.pi, 0.03, "drop") == weak

    def test_longer_times_converge(self):
        weak = continuum.p1_weak(0.2, TRANSVERSE)
        short = abs(continuum.p1_full(0.2, TRANSVERSE, 20 * math.pi, 0.03, "average") - weak)
        long = abs(continuum.p1_full(0.2, TRANSVERSE, 2000 * math.pi, 0.03, "average") - weak)
        assert long < short

    def test_average_is_window_mean_of_full(self):
        w0 = 40.0
        grid = np.linspace(w0, w0 + 2 * math.pi, 801)
        vals = [continuum.p1_full(0.1, TRANSVERSE, w, 0.03, rtol=1e-10) for w in grid]
        avg = continuum.p1_full(0.1, TRANSVERSE, w0, 0.03, "average", rtol=1e-10)
        assert avg == pytest.approx(np.trapezoid(vals, grid) / (2 * math.pi), abs=1e-8)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            continuum.p1_full(0.2, TRANSVERSE, 0.0, 0.03)
        with pytest.raises(ValueError):
            continuum.p1_full(0.2, TRANSVERSE, 10.0, 0.03, "bogus")
        with pytest.raises(ValueError):
            continuum.precession_cos(1.0, 0.0, "bogus")

    def test_window_average_cos(self):
        # Mean of cos(x) over a full period vanishes; k = 2 also.
        assert continuum.window_average_cos(3.0, 1.0) == pytest.approx(0.0, abs=1e-15)
        assert continuum.window_average_cos(3.0, 2.0) == pytest.approx(0.0, abs=1e-15)
        x = np.linspace(3.0, 3.0 + 2 * math.pi, 100001)
        assert continuum.window_average_cos(3.0, 1.3) == pytest.approx(
            np.trapezoid(np.cos(1.3 * x), x) / (2 * math.pi), abs=1e-10
        )


class TestPointerMoments:
    def test_figure_three_example(self):
        m = continuum.pointer_moments(0.2, MeasurementGeometry(math.pi / 4, 0.0), 0.03)
        assert m.mean == pytest.approx(0.70711, abs=1e-5)
        assert m.variance == pytest.approx(0.0209, abs=1e-12)

    def test_transverse_example(self):
        m = continuum.pointer_moments(0.1, MeasurementGeometry(math.pi / 2, 0.0), 0.03)
        assert m.mean == pytest.approx(0.0, abs=1e-15)
        assert m.variance == pytest.approx(0.0109, abs=1e-15)

    def test_no_environment(self):
        m = continuum.pointer_moments(0.0, MeasurementGeometry(1.0, 0.0), 0.03)
        assert m.variance == pytest.approx(0.0009, abs=1e-18)

    @given(st.floats(0, 5), st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True),
           st.floats(0, 1))
    def test_only_broadens(self, s_d, g, e, sp):
        m = continuum.pointer_moments(s_d, MeasurementGeometry(g, e), sp)
        assert m.variance >= sp**2


class TestPointerDensity:
    grid = np.linspace(-0.5, 2.0, 2001)

    @pytest.mark.parametrize("s_d", [0.0, 0.05, 0.1, 0.2, 0.35])
    @pytest.mark.parametrize("eta", [0.0, 1.0, math.pi / 2])
    def test_quadrature_equals_closed_form(self, s_d, eta):
        geom = MeasurementGeometry(math.pi / 4, eta)
        q = continuum.pointer_density(s_d, geom, 0.03, self.grid)
        c = continuum.pointer_density(s_d, geom, 0.03, self.grid, method="closed")
        assert np.max(np.abs(q - c)) < 1e-8

    def test_no_broadening_for_orthogonal_azimuth(self):
        geom = MeasurementGeometry(math.pi / 4, math.pi / 2)
        d = continuum.pointer_density(0.3, geom, 0.03, self.grid)
        np.testing.assert_allclose(d, core.gaussian_pdf(self.grid, math.cos(math.pi / 4), 0.03), atol=1e-12)

    def test_progressive_broadening(self):
        geom = MeasurementGeometry(math.pi / 4, 0.0)
        peaks = [continuum.pointer_density(s, geom, 0.03, self.grid).max() for s in (0.05, 0.1, 0.2)]
        assert peaks[0] > peaks[1] > peaks[2]
        d = continuum.pointer_density(0.2, geom, 0.03, self.grid)
        assert self.grid[np.argmax(d)] == pytest.approx(0.7071, abs=2e-3)

    def test_weak_regime_warning(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", RegimeWarning)
            continuum.pointer_density(0.2, MeasurementGeometry(1.0, 0, 0.1), 0.03, [0.0])
            with pytest.raises(RegimeWarning):
                continuum.pointer_density(0.5, MeasurementGeometry(1.0), 0.03, [0.0])
            with pytest.raises(RegimeWarning):
                continuum.pointer_density(0.1, MeasurementGeometry(1.0, 0, 0.2), 0.03, [0.0])

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            continuum.pointer_density(0.1, MeasurementGeometry(1.0), 0.03, [0.0], method="mc")

    def test_exact_weights_close_in_weak_regime(self):
        geom = MeasurementGeometry(math.pi / 4, 0.0, 0.05)
        x = np.linspace(-1.5, 2.0, 3501)
        ex = continuum.pointer_density_exact_weights(0.05, geom, 0.03, x)
        lin = continuum.pointer_density(0.05, geom, 0.03, x)
        assert np.trapezoid(ex, x) == pytest.approx(1.0, abs=1e-6)
        # Linearization error is second order in s_d, far below the peak height.
        assert np.max(np.abs(ex - lin)) < 0.05 * lin.max()

    def test_exact_weights_no_environment(self):
        geom = MeasurementGeometry(math.pi / 3, 0.0, 0.1)
        rz = core.effective_field(geom, 0.0).r[2]
        up = 0.5 * (1 + rz)
        expect = up * core.gaussian_pdf(self.grid, 0.5, 0.03) + (1 - up) * core.gaussian_pdf(
            self.grid, -0.5, 0.03)
        np.testing.assert_allclose(
            continuum.pointer_density_exact_weights(0.0, geom, 0.03, self.grid), expect, atol=1e-12)


class TestZAxis:
    def test_success_probability_values(self):
        assert continuum.zaxis_success_probability(1.0) == pytest.approx(0.8413447460685429, rel=1e-14)
        assert continuum.zaxis_success_probability(0.5) == pytest.approx(0.9772498680518208, rel=1e-14)
        assert continuum.zaxis_success_probability(2.0) == pytest.approx(0.6914624612740131, rel=1e-14)

    def test_limits(self):
        assert continuum.zaxis_success_probability(0.0) == 1.0
        assert continuum.zaxis_success_probability(0.01) == pytest.approx(1.0, abs=1e-6)
        assert continuum.zaxis_success_probability(50.0) == pytest.approx(0.5, abs=0.01)

    @given(st.floats(0.001, 1e3), st.floats(0.001, 1e3))
    def test_decreasing_and_bounded(self, a, b):
        lo, hi = sorted((a, b))
        pa, pb = continuum.zaxis_success_probability(lo), continuum.zaxis_success_probability(hi)
        assert 0.5 <= pb <= pa <= 1.0

    def test_mixture_components(self):
        mix = continuum.zaxis_pointer_mixture(1.0, math.pi / 4, 0.03)
        assert list(mix.widths) == [0.03, 0.03]
        np.testing.assert_allclose(mix.centers, [math.cos(math.pi / 4), -math.cos(math.pi / 4)])
        p = continuum.zaxis_success_probability(1.0)
        assert mix.mean == pytest.approx((2 * p - 1) * math.cos(math.pi / 4), rel=1e-13)
        assert abs(continuum.zaxis_pointer_mixture(1e4, math.pi / 4, 0.03).mean) < 1e-4

    @pytest.mark.parametrize("s_d", [0.5, 1.0, 2.0, 10.0])
    @pytest.mark.parametrize("gamma", [0.2, math.pi / 4, 1.3])
    def test_two_modes(self, s_d, gamma):
        x = np.linspace(-1.2, 1.2, 24001)
        d = continuum.zaxis_pointer_density(s_d, gamma, 0.03, x)
        peaks, _ = signal.find_peaks(d)
        assert len(peaks) == 2
        assert x[peaks[1]] - x[peaks[0]] == pytest.approx(2 * math.cos(gamma), abs=2e-4)
        assert np.trapezoid(d, x) == pytest.approx(1.0, abs=1e-9)

    def test_single_peak_for_weak_environment(self):
        x = np.linspace(-1.2, 1.2, 24001)
        d = continuum.zaxis_pointer_density(0.05, math.pi / 4, 0.03, x)
        assert x[np.argmax(d)] == pytest.approx(math.cos(math.pi / 4), abs=2e-4)
        assert d[np.argmin(np.abs(x + math.cos(math.pi / 4)))] < 1e-10

    def test_chi_expansion(self):
        assert continuum.zaxis_chi_expansion(0.1, math.pi / 4, 0.0) == pytest.approx(
            (1 + 0.1 * math.cos(math.pi / 4), 1))
        chi, sign = continuum.zaxis_chi_expansion(0.1, math.pi / 4, -2.0)
        assert sign == -1
        assert chi == pytest.approx(1 - 0.0707107, abs=1e-6)
        with pytest.raises(SingularPoint):
            continuum.zaxis_chi_expansion(0.1, 1.0, -1.0)

    @given(st.floats(0, math.pi), st.floats(-10, 10).filter(lambda b: abs(1 + b) > 0.05))
    def test_expansion_first_order(self, g, b):
        xi = 1e-4
        chi, _ = continuum.zaxis_chi_expansion(xi, g, b)
        assert chi == pytest.approx(float(continuum.zaxis_chi(xi, g, b)), abs=xi**2 / abs(1 + b) * 2)


class TestGeneralQubit:
    def test_reduces_to_pointer_moments(self):
        from protectosim.constants import HBAR

        cfg = continuum.GeneralQubitConfig(zeta=1.0, omega0=1.0, T=100.0, k=0.5 * HBAR * 100 * 0.1,
                                           sigma_ell=0.03, s_d=0.2, gamma=math.pi / 4)
        m = continuum.general_qubit_map(cfg)
        pm = continuum.pointer_moments(0.2, MeasurementGeometry(math.pi / 4, 0.0), 0.03)
        assert m.variance == pm.variance
        assert m.shift == pm.mean
        assert m.variance == pytest.approx(0.0209, abs=1e-15)
        assert m.xi == pytest.approx(0.1, rel=1e-12)
        assert not m.regime_violation
        assert m.b_tilde_scale is None

    @given(st.floats(0, 3), st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True),
           st.floats(0.001, 1))
    def test_bit_exact_against_dimensionless(self, s_d, g, e, sp):
        cfg = continuum.GeneralQubitConfig(1.0, 1.0, 20.0, 0.0, sp, s_d, g, e)
        pm = continuum.pointer_moments(s_d, MeasurementGeometry(g, e), sp)
        m = continuum.general_qubit_map(cfg)
        assert m.variance == pm.variance
        assert m.shift == pm.mean

    def test_shift_example(self):
        cfg = continuum.GeneralQubitConfig(2.0, 1.0, 20.0, 0.0, 0.1, 0.0, math.pi / 3)
        m = continuum.general_qubit_map(cfg)
        assert m.shift == pytest.approx(1.0)
        assert m.variance == pytest.approx(0.01)

    def test_regime_violation(self):
        cfg = continuum.GeneralQubitConfig(1.0, 1.0, 5.0, 0.0, 0.1, 0.1, 1.0, epsilon=2e-34)
        with pytest.warns(RegimeWarning):
            m = continuum.general_qubit_map(cfg)
        assert m.regime_violation
        from protectosim.constants import HBAR
        assert m.b_tilde_scale == pytest.approx(2e-34 / HBAR)
