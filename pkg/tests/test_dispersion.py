import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpgsim import dispersion as d
from qpgsim.errors import MaterialFileError, OutOfValidityRange


def zelmon_ln(lam_um, pol):
    # congruent LiNbO3 at room temperature, three-term Sellmeier
    l2 = lam_um**2
    if pol == "e":
        terms = ((2.9804, 0.02047), (0.5981, 0.0666), (8.9543, 416.08))
    else:
        terms = ((2.6734, 0.01764), (1.2290, 0.05914), (12.614, 474.6))
    return np.sqrt(1 + sum(b * l2 / (l2 - c) for b, c in terms))


@pytest.mark.parametrize("pol", ["o", "e"])
@pytest.mark.parametrize("lam", [800.0, 1064.0, 1550.0, 2000.0])
def test_bulk_ln_matches_independent_sellmeier(pol, lam):
    m = d.get_material("lithium-niobate-bulk", pol)
    assert d.refractive_index(m, lam, 24.5) == pytest.approx(zelmon_ln(lam / 1e3, pol), abs=5e-4)


def test_ktp_room_temperature_values():
    y, z = d.get_material("ktp-bulk", "y"), d.get_material("ktp-bulk", "z")
    assert d.refractive_index(y, 1550.0, 25.0) == pytest.approx(1.7348, abs=2e-3)
    assert d.refractive_index(z, 1550.0, 25.0) == pytest.approx(1.8163, abs=2e-3)


def test_thermo_optic_sign():
    for name, pol in [("lithium-niobate-bulk", "e"), ("ktp-bulk", "z"), ("lithium-tantalate-bulk", "e")]:
        m = d.get_material(name, pol)
        assert d.refractive_index(m, 1550.0, 150.0) > d.refractive_index(m, 1550.0, 30.0)


def test_group_index_against_analytic_derivative(ln_o):
    # n_g = n - lambda dn/dlambda, with dn/dlambda from a wide five-point stencil
    lam, T, h = 1545.0, 190.0, 0.05
    n = lambda x: d.refractive_index(ln_o, x, T)
    dn = (-n(lam + 2 * h) + 8 * n(lam + h) - 8 * n(lam - h) + n(lam - 2 * h)) / (12 * h)
    assert d.group_index(ln_o, lam, T) == pytest.approx(n(lam) - lam * dn, abs=1e-7)


def test_group_index_exceeds_phase_index(ln_o, ln_e):
    for m in (ln_o, ln_e):
        lam = np.linspace(500, 3000, 20)
        assert np.all(d.group_index(m, lam, 100.0) > d.refractive_index(m, lam, 100.0))


def test_out_of_range_reports_axis():
    m = d.get_material("ktp-bulk", "y")
    with pytest.raises(OutOfValidityRange) as e:
        d.refractive_index(m, 300.0, 25.0)
    assert e.value.axis == "wavelength_nm"
    with pytest.raises(OutOfValidityRange) as e:
        d.refractive_index(m, 1000.0, 400.0)
    assert e.value.axis == "temperature_C"


def test_unknown_material():
    with pytest.raises(KeyError):
        d.get_material("quartz", "o")


def test_table_rejects_bad_lines():
    good = "x o sellmeier-f " + " ".join(["1"] * 14) + " 0.4 4 20 200\n"
    assert ("x", "o") in d.parse_material_table(good)
    with pytest.raises(MaterialFileError, match="line 2"):
        d.parse_material_table("# header\nx o sellmeier-f 1 2 3\n")
    with pytest.raises(MaterialFileError):
        d.parse_material_table("x o nosuchform " + " ".join(["1"] * 18) + "\n")
    with pytest.raises(MaterialFileError, match="duplicate"):
        d.parse_material_table(good + good)


def test_data_dir_override(tmp_path, monkeypatch):
    (tmp_path / "sellmeier.txt").write_text(
        "glass o sellmeier-f 2.25 0 0.1 0 0 0 0 0 0 0 0 0 0 0 0.4 4 0 100\n"
    )
    monkeypatch.setenv(d.DATA_ENV, str(tmp_path))
    m = d.get_material("glass", "o")
    # n^2 = 2.25 + 0 / (...) -> 1.5 everywhere
    assert d.refractive_index(m, 1000.0, 20.0) == pytest.approx(1.5)
    assert d.group_index(m, 1000.0, 20.0) == pytest.approx(1.5, abs=1e-8)


@given(st.floats(200.0, 5000.0))
def test_wavelength_frequency_round_trip(lam):
    assert d.frequency_to_wavelength(d.wavelength_to_frequency(lam)) == pytest.approx(lam, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.floats(600.0, 2500.0), st.floats(600.0, 2500.0), st.floats(25.0, 300.0))
def test_gvm_antisymmetric(ln_o, a, b, T):
    g_ab = d.gvm_map(ln_o, ln_o, [a], [b], T).values[0, 0]
    g_ba = d.gvm_map(ln_o, ln_o, [b], [a], T).values[0, 0]
    assert g_ab == pytest.approx(-g_ba, abs=1e-22)


def test_gvm_zero_contour_contains_calibrated_point(ln_o, ln_e):
    g = d.gvm_map(ln_o, ln_e, np.linspace(1500, 1600, 11), np.linspace(800, 900, 101), 190.0)
    contour = g.zero_contour()
    row = contour[np.isclose(contour[:, 0], 1540.0) | np.isclose(contour[:, 0], 1550.0)]
    assert row.shape[0] == 2
    assert np.all(np.abs(row[:, 1] - 854.0) < 5.0)
