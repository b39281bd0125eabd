import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpgsim import jsa, presets
from qpgsim.errors import NumericalFailure, TargetUnreachable
from qpgsim.grids import ComplexMap2D, SpectralGrid


def eigh_schmidt_number(a):
    # K from the reduced density matrix A A^H, independent of the SVD path
    w = np.linalg.eigvalsh(a @ a.conj().T)
    p = np.clip(w, 0, None) / w.sum()
    return 1.0 / np.sum(p**2)


def random_kernel(seed, n=64):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@pytest.mark.parametrize("seed", range(3))
def test_schmidt_reconstruction_and_eigh_oracle(seed):
    a = random_kernel(seed)
    dec = jsa.schmidt(a)
    assert np.max(np.abs(dec.reconstruct() - a)) < 1e-8
    assert dec.schmidt_number == pytest.approx(eigh_schmidt_number(a), rel=1e-10)
    assert np.sum(dec.coefficients**2) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(dec.coefficients) <= 0)


@pytest.mark.parametrize("ratio", [1.0, 2.0, 1 / 0.3])
def test_double_gaussian_schmidt_number(ratio):
    # exp(-(x+y)^2/4s+^2 - (x-y)^2/4s-^2) has K = (r + 1/r)/2, r = s+/s-
    x = np.linspace(-6, 6, 240)
    X, Y = np.meshgrid(x, x, indexing="ij")
    a = np.exp(-((X + Y) ** 2) / 4 - (X - Y) ** 2 * ratio**2 / 4)
    assert jsa.schmidt(a).schmidt_number == pytest.approx(0.5 * (ratio + 1 / ratio), rel=1e-5)


def test_separable_kernel_is_single_mode():
    u, v = np.exp(-np.linspace(-3, 3, 40) ** 2), np.cos(np.linspace(0, 2, 30))
    dec = jsa.schmidt(np.outer(u, v))
    assert dec.schmidt_number == pytest.approx(1.0, abs=1e-12)
    assert dec.purity == pytest.approx(1.0, abs=1e-12)


def test_schmidt_failures():
    with pytest.raises(NumericalFailure):
        jsa.schmidt(np.zeros((4, 4)))
    bad = np.ones((4, 4))
    bad[1, 1] = np.nan
    with pytest.raises(NumericalFailure):
        jsa.schmidt(bad)


def test_pump_envelope_shapes(tmp_path):
    p = jsa.PumpEnvelope(centre=772.5, fwhm=1e12)
    f0 = p.centre_frequency
    assert abs(p(f0 + 0.5e12)) ** 2 == pytest.approx(0.5)
    flat = p.with_fwhm(np.inf)
    assert np.all(flat(np.array([0.9, 1.1]) * f0) == 1)
    f = f0 + np.linspace(-3e12, 3e12, 601)
    np.savetxt(tmp_path / "pump.txt", np.column_stack([f, p(f).real, p(f).imag]))
    s = jsa.PumpEnvelope.from_file(tmp_path / "pump.txt")
    assert s.fwhm == pytest.approx(1e12, rel=2e-2)
    assert s(f0) == pytest.approx(1.0)
    assert s(f0 + 5e12) == 0
    with pytest.raises(ValueError):
        jsa.PumpEnvelope(centre=772.5, fwhm=0.0)


@settings(max_examples=50)
@given(st.floats(1e9, 1e14), st.floats(1e9, 1e14))
def test_compression_reciprocity(a, b):
    assert jsa.compression_factor(a, b) * jsa.compression_factor(b, a) == pytest.approx(1.0, rel=1e-12)


def test_measured_compression():
    r = jsa.compression_factor(963e9, 129e9)
    assert r == pytest.approx(7.465, abs=1e-3)
    err = jsa.compression_uncertainty(963e9, 11e9, 129e9, 4e9)
    assert err == pytest.approx(r * np.hypot(11 / 963, 4 / 129), rel=1e-12)


def test_pdc_poling_period_positive(pdc):
    assert pdc.poling_period > 0
    assert abs(jsa.pdc_delta_k(pdc, *(jsa.wavelength_to_frequency(x) for x in (1545.0, 1545.0)))) < 1e-6


@pytest.fixture(scope="module")
def tuned(pdc):
    grids = jsa.default_pdc_grids(pdc, presets.PDC_GRID_SPAN, presets.PDC_GRID_NUM)
    pump, k = jsa.tune_pump_for_decorrelation(pdc, 1.25, grids=grids)
    return pump, k, jsa.pdc_jsa(pdc, pump, *grids)


def test_tuned_source_near_separable(tuned):
    pump, k, jmap = tuned
    assert k < 1.25
    assert jsa.schmidt(jmap).schmidt_number == pytest.approx(k, rel=1e-6)
    # the marginal of the tuned source matches the measured 963 +- 11 GHz
    assert jsa.marginal_fwhm(jmap, 0).value == pytest.approx(963e9, abs=11e9)


def test_pump_tuning_beats_neighbours(pdc, tuned):
    pump, k, _ = tuned
    grids = jsa.default_pdc_grids(pdc, presets.PDC_GRID_SPAN, presets.PDC_GRID_NUM)
    for f in (0.7, 1.4):
        other = jsa.schmidt(jsa.pdc_jsa(pdc, pump.with_fwhm(pump.fwhm * f), *grids)).schmidt_number
        assert other > k


def test_unreachable_target(pdc):
    grids = jsa.default_pdc_grids(pdc, span=8e12, num=80)
    with pytest.raises(TargetUnreachable) as e:
        jsa.tune_pump_for_decorrelation(pdc, 1.01, grids=grids)
    assert e.value.best[1] > 1.01


def test_conversion_kernel_single_mode_and_pump_independent(qpg):
    gi, go = jsa.default_conversion_grids(qpg)
    widths = []
    for w in (481.5e9, 963e9, 1926e9):
        jta = jsa.conversion_jta(qpg, jsa.PumpEnvelope(qpg.lambda_pump, w), gi, go)
        widths.append(jsa.marginal_fwhm(jta, 1).value)
        assert jsa.schmidt(jta).schmidt_number < 1.05
    assert (max(widths) - min(widths)) / min(widths) < 0.03


def test_convert_spectrum_linear(qpg):
    gi, go = jsa.default_conversion_grids(qpg, num_in=61, num_out=41)
    jta = jsa.conversion_jta(qpg, jsa.PumpEnvelope(qpg.lambda_pump, 963e9), gi, go)
    a = jsa.gaussian_amplitude(gi.frequencies, gi.frequencies.mean(), 963e9)
    b = np.cos(np.linspace(0, 3, gi.num))
    np.testing.assert_allclose(
        jsa.convert_spectrum(jta, 2 * a + b), 2 * jsa.convert_spectrum(jta, a) + jsa.convert_spectrum(jta, b), rtol=1e-12
    )


def test_complex_map_validation():
    g = SpectralGrid(1.0, 2.0, 3)
    with pytest.raises(ValueError):
        ComplexMap2D(g, g, np.zeros((3, 4)))
