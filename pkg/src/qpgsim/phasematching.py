"""
Quasi-phasematched sum-frequency generation: wavevector mismatch, poling
period, and the phasematching amplitude over (input, pump) wavelengths.

Conventions
-----------
Energy conservation ``1/lambda_out = 1/lambda_in + 1/lambda_pump``.

Mismatch ``dk = k_out - k_in - k_pump - m * 2 pi / period``, with
``k = 2 pi n(lambda, T) / lambda``. Flipping every sign leaves the
intensity unchanged.

Amplitude ``sinc(dk L / 2) * exp(i dk L / 2)`` with ``sinc(x) = sin(x)/x``
(not the pi-normalized variant), so the half-intensity point sits at
``|dk L / 2| = 1.39156``.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .dispersion import (
    MaterialModel,
    frequency_to_wavelength,
    inverse_group_velocity,
    wavelength_to_frequency,
    wavenumber,
)
from .errors import FitFailed, GridNotConverged, NoRoot
from .fwhm import halfmax_fwhm
from .grids import ComplexMap2D, SpectralGrid

# sinc^2(x) = 1/2
SINC2_HALF = 1.3915573782515103
POLING_BRACKET = (1e-7, 1e-1)  # metres


@dataclass(frozen=True)
class ProcessSpec:
    """A uniformly poled SFG process. Lengths in metres, wavelengths in nm."""

    material_in: MaterialModel
    material_pump: MaterialModel
    material_out: MaterialModel
    length: float
    temperature: float
    lambda_in: float
    lambda_pump: float
    poling_period: Optional[float] = None
    qpm_order: int = 1

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("length must be positive")
        if self.poling_period is not None and not self.poling_period > 0:
            raise ValueError("poling_period must be positive")
        if self.qpm_order < 1 or self.qpm_order % 2 == 0:
            raise ValueError("qpm_order must be an odd positive integer")
        if not (self.lambda_in > 0 and self.lambda_pump > 0):
            raise ValueError("wavelengths must be positive")

    @property
    def lambda_out(self):
        return 1.0 / (1.0 / self.lambda_in + 1.0 / self.lambda_pump)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def solved(self):
        """Copy with the poling period solved at the centre wavelengths."""
        return self.replace(poling_period=solve_poling_period(self))


def sum_wavelength(lambda_in, lambda_pump):
    return 1.0 / (1.0 / np.asarray(lambda_in, dtype=float) + 1.0 / np.asarray(lambda_pump, dtype=float))


def material_mismatch(spec, lambda_in, lambda_pump):
    """k_out - k_in - k_pump without the grating term, in 1/m."""
    lambda_in = np.asarray(lambda_in, dtype=float)
    lambda_pump = np.asarray(lambda_pump, dtype=float)
    lambda_out = sum_wavelength(lambda_in, lambda_pump)
    T = spec.temperature
    return (
        wavenumber(spec.material_out, lambda_out, T)
        - wavenumber(spec.material_in, lambda_in, T)
        - wavenumber(spec.material_pump, lambda_pump, T)
    )


def grating_wavenumber(spec, poling_period=None):
    period = spec.poling_period if poling_period is None else poling_period
    if period is None:
        raise ValueError("spec has no poling period; call solve_poling_period first")
    return spec.qpm_order * 2 * np.pi / period


def delta_k(spec, lambda_in=None, lambda_pump=None):
    """Wavevector mismatch (1/m) at the given wavelengths (default: spec centre)."""
    lambda_in = spec.lambda_in if lambda_in is None else lambda_in
    lambda_pump = spec.lambda_pump if lambda_pump is None else lambda_pump
    return material_mismatch(spec, lambda_in, lambda_pump) - grating_wavenumber(spec)


def solve_poling_period(spec, bracket=POLING_BRACKET):
    """Period (m) that cancels the mismatch at the centre wavelengths."""
    d0 = float(material_mismatch(spec, spec.lambda_in, spec.lambda_pump))
    m2pi = spec.qpm_order * 2 * np.pi

    def f(period):
        return d0 - m2pi / period

    lo, hi = bracket
    flo, fhi = f(lo), f(hi)
    if not flo * fhi < 0:
        raise NoRoot(
            f"no sign change of the mismatch for periods in [{lo:g}, {hi:g}] m "
            f"(material mismatch {d0:.6g} 1/m, order {spec.qpm_order})"
        )
    return brentq(f, lo, hi, xtol=1e-30, rtol=1e-14, maxiter=500)


def sinc(x):
    """sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def phasematching_amplitude(dk, length):
    x = 0.5 * np.asarray(dk, dtype=float) * length
    return sinc(x) * np.exp(1j * x)


def phasematching_map(spec, grid_in, grid_pump):
    """Complex phasematching over an (input x pump) wavelength grid."""
    lam_in = grid_in.wavelengths
    lam_p = grid_pump.wavelengths
    dk = delta_k(spec, lam_in[:, None], lam_p[None, :])
    values = phasematching_amplitude(dk, spec.length)
    return ComplexMap2D(
        grid_in,
        grid_pump,
        values,
        labels=("lambda_in", "lambda_pump"),
        meta={"kind": "phasematching", "length_m": spec.length, "temperature_C": spec.temperature},
    )


def output_gvm(spec):
    """1/v_g(out) - 1/v_g(pump) at the centre, s/m."""
    T = spec.temperature
    return float(
        inverse_group_velocity(spec.material_out, spec.lambda_out, T)
        - inverse_group_velocity(spec.material_pump, spec.lambda_pump, T)
    )


def output_cut(spec, f_out):
    """|phasematching|^2 against output frequency at the central input wavelength."""
    f_in = wavelength_to_frequency(spec.lambda_in)
    lam_p = frequency_to_wavelength(np.asarray(f_out) - f_in)
    dk = delta_k(spec, spec.lambda_in, lam_p)
    return np.abs(phasematching_amplitude(dk, spec.length)) ** 2


def phasematching_output_fwhm(spec, num=257, rtol=1e-3, max_refinements=10):
    """FWHM (Hz) of the phasematching intensity along output frequency.

    The input is held at its central wavelength. The 1-D cut is recentred on
    the peak and refined (span tracks the width, point count doubles) until
    successive widths agree to ``rtol``.
    """
    f0 = float(wavelength_to_frequency(spec.lambda_out))
    gvm = abs(output_gvm(spec))
    guess = 4 * SINC2_HALF / (2 * np.pi * gvm * spec.length) if gvm > 0 else 1e-3 * f0
    centre, halfspan = f0, 3 * guess
    previous = None
    n = num
    for _ in range(max_refinements):
        f = np.linspace(centre - halfspan, centre + halfspan, n)
        y = output_cut(spec, f)
        ipk = int(np.argmax(y))
        try:
            width, (fl, fr) = halfmax_fwhm(f, y, return_edges=True)
        except FitFailed:
            if ipk in (0, n - 1):
                centre = f[ipk]
            halfspan *= 2
            continue
        centre = 0.5 * (fl + fr)
        if previous is not None and abs(width - previous) < rtol * width:
            return width
        previous = width
        halfspan = 3 * width
        n = 2 * n - 1
    raise GridNotConverged(f"output FWHM not converged after {max_refinements} refinements")
