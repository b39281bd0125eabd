import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from qpgsim import phasematching as pm
from qpgsim.dispersion import inverse_group_velocity
from qpgsim.errors import GridNotConverged, NoRoot
from qpgsim.grids import SpectralGrid


def test_half_intensity_constant():
    x = brentq(lambda x: (np.sin(x) / x) ** 2 - 0.5, 0.5, 2.5, xtol=1e-15)
    assert pm.SINC2_HALF == pytest.approx(x, abs=1e-13)


def test_sinc_convention():
    assert pm.sinc(0.0) == 1.0
    assert pm.sinc(np.pi) == pytest.approx(0.0, abs=1e-15)
    assert pm.sinc(1.0) == pytest.approx(np.sin(1.0))


@given(st.floats(-1e3, 1e3, allow_nan=False))
def test_sinc_even_and_bounded(x):
    assert pm.sinc(x) == pm.sinc(-x)
    assert abs(pm.phasematching_amplitude(2 * x, 1.0)) <= 1.0


def test_energy_conservation():
    assert pm.sum_wavelength(1545.0, 854.0) == pytest.approx(550.0, abs=0.1)
    assert pm.sum_wavelength(1560.0, 907.0) == pytest.approx(574.0, abs=0.5)
    assert pm.sum_wavelength(1278.0, 1748.0) == pytest.approx(738.0, abs=0.5)


def test_poling_period_is_grating_oracle(qpg):
    # Lambda = 2 pi m / D with D the material mismatch at the centre
    D = float(pm.material_mismatch(qpg, qpg.lambda_in, qpg.lambda_pump))
    assert qpg.poling_period == pytest.approx(2 * np.pi / D, rel=1e-12)
    assert abs(pm.delta_k(qpg)) < 1e-6
    third = qpg.replace(qpm_order=3, poling_period=None).solved()
    assert third.poling_period == pytest.approx(3 * qpg.poling_period, rel=1e-12)


def test_poling_period_no_root(qpg):
    with pytest.raises(NoRoot):
        pm.solve_poling_period(qpg, bracket=(1e-3, 1e-2))


def test_spec_validation(qpg):
    with pytest.raises(ValueError):
        qpg.replace(length=0.0)
    with pytest.raises(ValueError):
        qpg.replace(qpm_order=2)
    with pytest.raises(ValueError):
        qpg.replace(poling_period=-1.0)


def test_map_intensity_is_function_of_dk(qpg):
    gi = SpectralGrid(1535.0, 1555.0, 64)
    gp = SpectralGrid(850.0, 858.0, 48)
    m = pm.phasematching_map(qpg, gi, gp)
    dk = pm.delta_k(qpg, gi.wavelengths[:, None], gp.wavelengths[None, :])
    x = dk * qpg.length / 2
    np.testing.assert_allclose(m.intensity, (np.sin(x) / x) ** 2, rtol=0, atol=1e-12)
    assert m.intensity.max() <= 1.0


def test_map_peak_at_design_point(qpg):
    gi = SpectralGrid.centred(qpg.lambda_in, 2.0, 5)
    gp = SpectralGrid.centred(qpg.lambda_pump, 2.0, 5)
    m = pm.phasematching_map(qpg, gi, gp)
    assert m.intensity[2, 2] == pytest.approx(1.0, abs=1e-12)


def test_output_fwhm_matches_linear_mismatch_oracle(qpg):
    # dk is linear in output frequency at fixed input with slope 2 pi * GVM(out, pump)
    T = qpg.temperature
    gvm = inverse_group_velocity(qpg.material_out, qpg.lambda_out, T) - inverse_group_velocity(
        qpg.material_pump, qpg.lambda_pump, T
    )
    oracle = 4 * pm.SINC2_HALF / (2 * np.pi * abs(gvm) * qpg.length)
    assert pm.phasematching_output_fwhm(qpg) == pytest.approx(oracle, rel=5e-3)


def test_output_fwhm_not_converged(qpg):
    with pytest.raises(GridNotConverged):
        pm.phasematching_output_fwhm(qpg, num=9, rtol=1e-12, max_refinements=2)


@settings(max_examples=8, deadline=None)
@given(st.floats(5e-3, 60e-3))
def test_fwhm_times_length_constant(qpg, length):
    ref = pm.phasematching_output_fwhm(qpg) * qpg.length
    s = qpg.replace(length=length)
    assert pm.phasematching_output_fwhm(s) * length == pytest.approx(ref, rel=2e-3)


def test_wide_input_acceptance(qpg):
    # along fixed output frequency the converter accepts a broad input band
    f_out = pm.wavelength_to_frequency(qpg.lambda_out)
    lam_in = np.linspace(qpg.lambda_in - 10, qpg.lambda_in + 10, 41)
    lam_p = pm.frequency_to_wavelength(f_out - pm.wavelength_to_frequency(lam_in))
    amp = np.abs(pm.phasematching_amplitude(pm.delta_k(qpg, lam_in, lam_p), qpg.length))
    assert amp.min() > 0.9
