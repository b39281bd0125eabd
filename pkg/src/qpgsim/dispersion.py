"""
Temperature-dependent refractive index, group index and group-velocity mismatch.

Wavelengths are vacuum wavelengths in nanometres, frequencies in hertz and
temperatures in degrees Celsius throughout the package. Coefficient tables
work in micrometres internally; the conversion happens here and nowhere else.

Coefficient sets live in ``data/sellmeier.txt`` (format documented in that
file). The directory can be replaced with the ``QPGSIM_DATA_DIR``
environment variable.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import MaterialFileError, OutOfValidityRange

__all__ = [
    "SPEED_OF_LIGHT",
    "MaterialModel",
    "wavelength_to_frequency",
    "frequency_to_wavelength",
    "load_materials",
    "get_material",
    "available_materials",
    "refractive_index",
    "wavenumber",
    "group_index",
    "group_velocity",
    "inverse_group_velocity",
    "GVMMap",
    "gvm_map",
]

DATA_ENV = "QPGSIM_DATA_DIR"
DEFAULT_REL_STEP = 1e-6

# number of coefficients per formula family
FORMS = {"sellmeier-f": 14, "kato-thermal": 14}


def wavelength_to_frequency(wavelength_nm):
    """Vacuum wavelength [nm] -> frequency [Hz]."""
    return SPEED_OF_LIGHT / (np.asarray(wavelength_nm, dtype=float) * 1e-9)


def frequency_to_wavelength(frequency_hz):
    """Frequency [Hz] -> vacuum wavelength [nm]."""
    return SPEED_OF_LIGHT / np.asarray(frequency_hz, dtype=float) * 1e9


@dataclass(frozen=True)
class MaterialModel:
    """A coefficient record for one material and polarization.

    ``wavelength_range`` is in micrometres (as in the data file) and
    ``temperature_range`` in degrees Celsius.
    """

    name: str
    polarization: str
    form: str
    coefficients: tuple
    wavelength_range: tuple
    temperature_range: tuple

    @property
    def label(self):
        return f"{self.name}/{self.polarization}"

    def check(self, wavelength_nm, temperature):
        lam_um = np.asarray(wavelength_nm, dtype=float) * 1e-3
        lo, hi = self.wavelength_range
        if lam_um.size and (not np.all(np.isfinite(lam_um)) or lam_um.min() < lo or lam_um.max() > hi):
            bad = lam_um[(lam_um < lo) | (lam_um > hi) | ~np.isfinite(lam_um)].flat[0] * 1e3
            raise OutOfValidityRange(self.label, "wavelength_nm", float(bad), (lo * 1e3, hi * 1e3))
        t = np.asarray(temperature, dtype=float)
        tlo, thi = self.temperature_range
        if t.size and (not np.all(np.isfinite(t)) or t.min() < tlo or t.max() > thi):
            bad = t[(t < tlo) | (t > thi) | ~np.isfinite(t)].flat[0]
            raise OutOfValidityRange(self.label, "temperature_C", float(bad), (tlo, thi))

    def _index_um(self, lam, T):
        k = self.coefficients
        l2 = lam * lam
        if self.form == "sellmeier-f":
            a1, a2, a3, a4, a5, a6, b1, b2, b3, b4, b5, t0, t1, dn = k
            f = (T - t0) * (T + t1)
            n2 = a1 + b1 * f + (a2 + b2 * f) / (l2 - (a3 + b3 * f) ** 2) - a6 * l2
            if a4 != 0 or b4 != 0:
                n2 = n2 + (a4 + b4 * f) / (l2 - (a5 + b5 * f) ** 2)
            return np.sqrt(n2) + dn
        if self.form == "kato-thermal":
            A, B, C, D, E, F = k[:6]
            p, q = k[6:10], k[10:14]
            n25 = np.sqrt(A + B / (1 - C / l2) + D / (1 - E / l2) - F * l2)
            n1 = sum(pm / lam**m for m, pm in enumerate(p)) * 1e-6
            n2 = sum(qm / lam**m for m, qm in enumerate(q)) * 1e-8
            dT = T - 25.0
            return n25 + n1 * dT + n2 * dT * dT
        raise MaterialFileError(f"unknown form {self.form!r}")


def _parse_line(line, lineno):
    fields = line.split()
    if len(fields) < 3:
        raise MaterialFileError(f"line {lineno}: expected 'material polarization form ...'")
    name, pol, form = fields[:3]
    if form not in FORMS:
        raise MaterialFileError(f"line {lineno}: unknown form {form!r}")
    expected = 3 + FORMS[form] + 4
    if len(fields) != expected:
        raise MaterialFileError(
            f"line {lineno}: form {form} needs {expected} fields, got {len(fields)}"
        )
    try:
        values = [float(v) for v in fields[3:]]
    except ValueError as exc:
        raise MaterialFileError(f"line {lineno}: {exc}") from None
    coeffs = tuple(values[:-4])
    lmin, lmax, tmin, tmax = values[-4:]
    if not (0 < lmin < lmax) or not (tmin < tmax):
        raise MaterialFileError(f"line {lineno}: empty or inverted validity window")
    return MaterialModel(name, pol, form, coeffs, (lmin, lmax), (tmin, tmax))


def parse_material_table(text):
    """Parse the coefficient table format; returns ``{(name, pol): MaterialModel}``."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        model = _parse_line(line, lineno)
        key = (model.name, model.polarization)
        if key in out:
            raise MaterialFileError(f"line {lineno}: duplicate record {model.label}")
        out[key] = model
    return out


def data_dir():
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else Path(__file__).parent / "data"


@lru_cache(maxsize=8)
def _load(path):
    return parse_material_table(Path(path).read_text())


def load_materials(path=None):
    if path is None:
        path = data_dir() / "sellmeier.txt"
    return dict(_load(str(path)))


def available_materials():
    return sorted({name for name, _ in load_materials()})


def get_material(name, polarization):
    table = load_materials()
    try:
        return table[(name, polarization)]
    except KeyError:
        known = ", ".join(f"{n}/{p}" for n, p in sorted(table))
        raise KeyError(f"unknown material {name}/{polarization}; known: {known}") from None


def refractive_index(material, wavelength_nm, temperature):
    """Phase index n(lambda, T). Raises OutOfValidityRange outside the fit window."""
    material.check(wavelength_nm, temperature)
    lam = np.asarray(wavelength_nm, dtype=float) * 1e-3
    n = material._index_um(lam, np.asarray(temperature, dtype=float))
    return n if np.ndim(n) else float(n)


def wavenumber(material, wavelength_nm, temperature):
    """k = 2 pi n / lambda in 1/m."""
    lam = np.asarray(wavelength_nm, dtype=float)
    return 2 * np.pi * refractive_index(material, lam, temperature) / (lam * 1e-9)


def group_index(material, wavelength_nm, temperature, rel_step=DEFAULT_REL_STEP):
    """Group index n - lambda dn/dlambda by central difference.

    The step is ``rel_step * lambda``; both stencil points must lie inside
    the validity window.
    """
    lam = np.asarray(wavelength_nm, dtype=float)
    h = lam * rel_step
    material.check(lam - h, temperature)
    material.check(lam + h, temperature)
    n = refractive_index(material, lam, temperature)
    dn = (refractive_index(material, lam + h, temperature) - refractive_index(material, lam - h, temperature)) / (2 * h)
    return n - lam * dn


def group_velocity(material, wavelength_nm, temperature, rel_step=DEFAULT_REL_STEP):
    """Group velocity c / n_g in m/s."""
    return SPEED_OF_LIGHT / group_index(material, wavelength_nm, temperature, rel_step)


def inverse_group_velocity(material, wavelength_nm, temperature, rel_step=DEFAULT_REL_STEP):
    """1 / v_g in s/m."""
    return group_index(material, wavelength_nm, temperature, rel_step) / SPEED_OF_LIGHT


@dataclass(frozen=True)
class GVMMap:
    """1/v_g(in) - 1/v_g(pump) on a wavelength grid, in s/m.

    ``values[i, j]`` belongs to ``lambda_in[i]`` and ``lambda_pump[j]``.
    """

    lambda_in: np.ndarray
    lambda_pump: np.ndarray
    values: np.ndarray
    temperature: float

    def zero_contour(self):
        """Linearly interpolated zero crossings along the pump axis, row by row.

        Returns an (M, 2) array of (lambda_in, lambda_pump) pairs.
        """
        pts = []
        lp = self.lambda_pump
        for lam_in, row in zip(self.lambda_in, self.values):
            exact = np.flatnonzero(row == 0)
            pts.extend((lam_in, lp[j]) for j in exact)
            s = np.sign(row)
            idx = np.flatnonzero(s[:-1] * s[1:] < 0)
            for j in idx:
                x = lp[j] - row[j] * (lp[j + 1] - lp[j]) / (row[j + 1] - row[j])
                pts.append((lam_in, x))
        return np.array(pts, dtype=float).reshape(-1, 2)


def gvm_map(material_in, material_pump, lambda_in, lambda_pump, temperature):
    """Group-velocity mismatch matrix over two wavelength axes.

    Axes are wavelength arrays in nm or SpectralGrid objects.
    """
    lambda_in = np.atleast_1d(np.asarray(getattr(lambda_in, "wavelengths", lambda_in), dtype=float))
    lambda_pump = np.atleast_1d(np.asarray(getattr(lambda_pump, "wavelengths", lambda_pump), dtype=float))
    a = inverse_group_velocity(material_in, lambda_in, temperature)
    b = inverse_group_velocity(material_pump, lambda_pump, temperature)
    return GVMMap(lambda_in, lambda_pump, a[:, None] - b[None, :], float(temperature))
