"""
Joint spectral amplitudes of the pair source and of the converter, their
Schmidt decomposition, marginal widths and the bandwidth-compression figure.

All 2-D kernels here are sampled on frequency grids (Hz) so that the
discrete SVD is a faithful Schmidt decomposition.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .dispersion import MaterialModel, frequency_to_wavelength, wavelength_to_frequency, wavenumber
from .errors import NoRoot, NumericalFailure, TargetUnreachable
from .fwhm import spectrum_fwhm
from .grids import ComplexMap2D, SpectralGrid
from .phasematching import POLING_BRACKET, delta_k, phasematching_amplitude


@dataclass(frozen=True)
class PumpEnvelope:
    """Spectral amplitude of a pump pulse.

    ``fwhm`` is the intensity FWHM in Hz; ``np.inf`` gives a flat
    (infinite-bandwidth) envelope. A ``sampled`` envelope carries
    ``(frequency_hz, complex_amplitude)`` arrays, normalized to unit peak
    magnitude, and is zero outside the sampled range.
    """

    centre: float  # nm
    fwhm: float
    shape: str = "gaussian"
    samples: Optional[tuple] = None

    def __post_init__(self):
        if not self.fwhm > 0:
            raise ValueError("pump fwhm must be positive")
        if self.shape not in ("gaussian", "sampled"):
            raise ValueError(f"unknown pump shape {self.shape!r}")
        if self.shape == "sampled":
            if self.samples is None:
                raise ValueError("sampled pump needs samples")
            f, a = (np.asarray(v) for v in self.samples)
            peak = np.abs(a).max()
            if not peak > 0:
                raise ValueError("sampled pump is identically zero")
            order = np.argsort(f)
            object.__setattr__(self, "samples", (f[order].astype(float), a[order].astype(complex) / peak))

    @classmethod
    def from_file(cls, path, centre=None):
        """Read ``frequency_hz re im`` columns; ``#`` starts a comment."""
        data = np.loadtxt(path, comments="#", ndmin=2)
        f, a = data[:, 0], data[:, 1] + 1j * data[:, 2]
        if centre is None:
            centre = float(frequency_to_wavelength(f[np.argmax(np.abs(a))]))
        intensity = np.abs(a) ** 2
        above = f[intensity >= 0.5 * intensity.max()]
        fwhm = float(above.max() - above.min()) or float(np.ptp(f))
        return cls(centre=centre, fwhm=fwhm, shape="sampled", samples=(f, a))

    @property
    def centre_frequency(self):
        return float(wavelength_to_frequency(self.centre))

    def with_fwhm(self, fwhm):
        return dataclasses.replace(self, fwhm=fwhm)

    def __call__(self, frequency_hz):
        f = np.asarray(frequency_hz, dtype=float)
        if self.shape == "sampled":
            fs, a = self.samples
            re = np.interp(f, fs, a.real, left=0.0, right=0.0)
            im = np.interp(f, fs, a.imag, left=0.0, right=0.0)
            return re + 1j * im
        if np.isinf(self.fwhm):
            return np.ones_like(f, dtype=complex)
        df = f - self.centre_frequency
        return np.exp(-2.0 * np.log(2.0) * (df / self.fwhm) ** 2).astype(complex)


# --- pair source -----------------------------------------------------------


@dataclass(frozen=True)
class PDCSpec:
    """Uniformly poled type-II down-conversion source (pump -> signal + idler).

    The grating term takes the sign of the material mismatch at the centre,
    so the period is always reported positive.
    """

    material_pump: MaterialModel
    material_signal: MaterialModel
    material_idler: MaterialModel
    length: float
    temperature: float
    lambda_signal: float
    lambda_idler: float
    poling_period: Optional[float] = None
    qpm_order: int = 1

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("length must be positive")
        if self.qpm_order < 1 or self.qpm_order % 2 == 0:
            raise ValueError("qpm_order must be an odd positive integer")

    @property
    def lambda_pump(self):
        return 1.0 / (1.0 / self.lambda_signal + 1.0 / self.lambda_idler)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def solved(self):
        return self.replace(poling_period=solve_pdc_poling_period(self))


def pdc_material_mismatch(spec, f_signal, f_idler):
    f_s = np.asarray(f_signal, dtype=float)
    f_i = np.asarray(f_idler, dtype=float)
    T = spec.temperature
    return (
        wavenumber(spec.material_pump, frequency_to_wavelength(f_s + f_i), T)
        - wavenumber(spec.material_signal, frequency_to_wavelength(f_s), T)
        - wavenumber(spec.material_idler, frequency_to_wavelength(f_i), T)
    )


def _pdc_centre_mismatch(spec):
    return float(pdc_material_mismatch(
        spec, wavelength_to_frequency(spec.lambda_signal), wavelength_to_frequency(spec.lambda_idler)
    ))


def solve_pdc_poling_period(spec, bracket=POLING_BRACKET):
    d0 = abs(_pdc_centre_mismatch(spec))
    m2pi = spec.qpm_order * 2 * np.pi
    lo, hi = bracket
    if not (d0 - m2pi / lo) * (d0 - m2pi / hi) < 0:
        raise NoRoot(f"no poling period in [{lo:g}, {hi:g}] m for mismatch {d0:.6g} 1/m")
    return brentq(lambda p: d0 - m2pi / p, lo, hi, xtol=1e-30, rtol=1e-14)


def pdc_delta_k(spec, f_signal, f_idler):
    if spec.poling_period is None:
        raise ValueError("spec has no poling period; call solve_pdc_poling_period first")
    sign = np.sign(_pdc_centre_mismatch(spec)) or 1.0
    grating = sign * spec.qpm_order * 2 * np.pi / spec.poling_period
    return pdc_material_mismatch(spec, f_signal, f_idler) - grating


def pdc_jsa(spec, pump, grid_signal, grid_idler):
    """Joint spectral amplitude pump(f_s + f_i) * phasematching(f_s, f_i)."""
    f_s = grid_signal.frequencies[:, None]
    f_i = grid_idler.frequencies[None, :]
    dk = pdc_delta_k(spec, f_s, f_i)
    values = pump(f_s + f_i) * phasematching_amplitude(dk, spec.length)
    return ComplexMap2D(grid_signal, grid_idler, values, labels=("f_signal", "f_idler"), meta={"kind": "pdc_jsa"})


def default_pdc_grids(spec, span=7e12, num=160):
    gs = SpectralGrid.centred(float(wavelength_to_frequency(spec.lambda_signal)), span, num, unit="Hz")
    gi = SpectralGrid.centred(float(wavelength_to_frequency(spec.lambda_idler)), span, num, unit="Hz")
    return gs, gi


# --- converter ---------------------------------------------------------------


def conversion_jta(spec, pump, grid_in, grid_out):
    """Joint transfer amplitude of the converter over (f_in, f_out).

    ``pump(f_out - f_in) * phasematching(lambda_in, lambda_pump)`` with the
    pump wavelength fixed by energy conservation.
    """
    f_in = grid_in.frequencies[:, None]
    f_out = grid_out.frequencies[None, :]
    f_p = f_out - f_in
    lam_p = frequency_to_wavelength(f_p)
    dk = delta_k(spec, frequency_to_wavelength(f_in), lam_p)
    values = pump(f_p) * phasematching_amplitude(dk, spec.length)
    return ComplexMap2D(grid_in, grid_out, values, labels=("f_in", "f_out"), meta={"kind": "conversion_jta"})


def default_conversion_grids(spec, in_span=6e12, out_span=0.6e12, num_in=241, num_out=241):
    gi = SpectralGrid.centred(float(wavelength_to_frequency(spec.lambda_in)), in_span, num_in, unit="Hz")
    go = SpectralGrid.centred(float(wavelength_to_frequency(spec.lambda_out)), out_span, num_out, unit="Hz")
    return gi, go


def gaussian_amplitude(frequencies, centre_hz, fwhm_hz):
    """Gaussian spectral amplitude whose intensity FWHM is ``fwhm_hz``."""
    df = np.asarray(frequencies, dtype=float) - centre_hz
    return np.exp(-2.0 * np.log(2.0) * (df / fwhm_hz) ** 2)


def convert_spectrum(jta, input_amplitude):
    """Output amplitude on ``jta.axis_second`` for an input spectral amplitude on ``jta.axis_in``."""
    a = np.asarray(input_amplitude)
    return (a[:, None] * jta.values).sum(axis=0) * jta.axis_in.step


# --- Schmidt decomposition ---------------------------------------------------


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``A = norm * sum_k c_k u_k v_k^T``.

    ``coefficients`` are descending with squares summing to one;
    ``input_modes[:, k]`` and ``second_modes[:, k]`` are orthonormal vectors.
    """

    coefficients: np.ndarray
    input_modes: np.ndarray
    second_modes: np.ndarray
    norm: float

    @property
    def schmidt_number(self):
        return 1.0 / np.sum(self.coefficients**4)

    @property
    def purity(self):
        return 1.0 / self.schmidt_number

    def reconstruct(self, n_modes=None):
        k = slice(None, n_modes)
        c = self.coefficients[k]
        return self.norm * (self.input_modes[:, k] * c) @ self.second_modes[:, k].T


def schmidt(jmap):
    """Schmidt decomposition of a sampled kernel by SVD."""
    a = np.asarray(getattr(jmap, "values", jmap))
    if not np.all(np.isfinite(a)):
        raise NumericalFailure("kernel contains non-finite entries")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from None
    norm = float(np.sqrt(np.sum(s**2)))
    if norm == 0:
        raise NumericalFailure("kernel is identically zero")
    return SchmidtDecomposition(s / norm, u, vh.T, norm)


# --- widths ------------------------------------------------------------------


def marginal_fwhm(jmap, axis=0, fit="gaussian_fit"):
    """FWHM (Hz) of an intensity marginal; see :class:`qpgsim.fwhm.FWHMResult`."""
    grid = jmap.axis(axis)
    return spectrum_fwhm(grid.frequencies, jmap.marginal(axis), fit=fit)


def compression_factor(input_fwhm, output_fwhm):
    if not (input_fwhm > 0 and output_fwhm > 0):
        raise ValueError("bandwidths must be positive")
    return input_fwhm / output_fwhm


def compression_uncertainty(input_fwhm, input_err, output_fwhm, output_err):
    """First-order propagated uncertainty of the compression factor."""
    r = compression_factor(input_fwhm, output_fwhm)
    return r * np.hypot(input_err / input_fwhm, output_err / output_fwhm)


# --- pump tuning -------------------------------------------------------------


def optimize_pump_bandwidth(kernel_for_fwhm, bounds, target_K=None, xatol=1e-4):
    """Minimize the Schmidt number over the pump FWHM.

    ``kernel_for_fwhm(fwhm)`` must return a kernel (array or ComplexMap2D).
    The search runs in log(fwhm) over ``bounds``. Returns ``(fwhm, K)``.
    """
    lo, hi = np.log(bounds[0]), np.log(bounds[1])

    def k_of(logw):
        return schmidt(kernel_for_fwhm(np.exp(logw))).schmidt_number

    res = minimize_scalar(k_of, bounds=(lo, hi), method="bounded", options={"xatol": xatol})
    fwhm, best = float(np.exp(res.x)), float(res.fun)
    if target_K is not None and best > target_K:
        raise TargetUnreachable(f"best Schmidt number {best:.4f} exceeds target {target_K}", best=(fwhm, best))
    return fwhm, best


def tune_pump_for_decorrelation(spec, target_K, grids=None, bounds=(1e11, 3e13)):
    """Gaussian pump whose bandwidth minimizes the source Schmidt number.

    Returns ``(PumpEnvelope, K)``; raises TargetUnreachable when the best K
    found exceeds ``target_K``.
    """
    if target_K < 1:
        raise ValueError("target_K must be >= 1")
    if spec.poling_period is None:
        spec = spec.solved()
    gs, gi = grids if grids is not None else default_pdc_grids(spec)
    base = PumpEnvelope(centre=spec.lambda_pump, fwhm=1e12)

    def kernel(fwhm):
        return pdc_jsa(spec, base.with_fwhm(fwhm), gs, gi).values

    fwhm, k = optimize_pump_bandwidth(kernel, bounds, target_K)
    return base.with_fwhm(fwhm), k
