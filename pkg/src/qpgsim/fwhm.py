"""Peak-width extraction for sampled spectra."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from .errors import FitFailed

GAUSS_FWHM_PER_SIGMA = 2.0 * np.sqrt(2.0 * np.log(2.0))
DISAGREEMENT = 0.05


@dataclass(frozen=True)
class FWHMResult:
    """Width of a single-peaked spectrum.

    ``value`` is the width from the requested extractor. Both extractors are
    always evaluated; ``disagree`` is set when they differ by more than 5 %.
    """

    value: float
    method: str
    gaussian: float
    halfmax: float
    centre: float

    @property
    def disagree(self):
        return abs(self.gaussian - self.halfmax) > DISAGREEMENT * min(self.gaussian, self.halfmax)

    def __float__(self):
        return float(self.value)


def _crossing(x0, x1, y0, y1, level):
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def halfmax_fwhm(x, y, return_edges=False):
    """Full width at half maximum by linear interpolation around the global peak.

    Raises FitFailed when the half-maximum level is not crossed on both sides or
    when a second lobe outside the central one reaches half maximum.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise FitFailed("need at least three samples")
    order = np.argsort(x)
    x, y = x[order], y[order]
    ipk = int(np.argmax(y))
    half = 0.5 * y[ipk]
    if not half > 0:
        raise FitFailed("spectrum has no positive peak")
    left = ipk
    while left > 0 and y[left - 1] >= half:
        left -= 1
    right = ipk
    while right < x.size - 1 and y[right + 1] >= half:
        right += 1
    if left == 0 or right == x.size - 1:
        raise FitFailed("half maximum not bracketed by the sampled range")
    if np.any(y[: left - 1] >= half) or np.any(y[right + 2 :] >= half):
        raise FitFailed("more than one lobe above half maximum")
    xl = _crossing(x[left - 1], x[left], y[left - 1], y[left], half)
    xr = _crossing(x[right], x[right + 1], y[right], y[right + 1], half)
    if return_edges:
        return xr - xl, (xl, xr)
    return xr - xl


def _gauss(x, a, x0, sigma):
    return a * np.exp(-0.5 * ((x - x0) / sigma) ** 2)


def gaussian_fit(x, y):
    """Least-squares Gaussian fit; returns (fwhm, centre)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w0, (xl, xr) = halfmax_fwhm(x, y, return_edges=True)
    x0 = 0.5 * (xl + xr)
    # fit in centred, scaled coordinates to keep the problem well conditioned
    scale = w0
    u = (x - x0) / scale
    ymax = y.max()
    try:
        with warnings.catch_warnings():
            # exact fits leave the covariance undefined; only popt is used
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _ = curve_fit(_gauss, u, y / ymax, p0=(1.0, 0.0, 1.0 / GAUSS_FWHM_PER_SIGMA), maxfev=5000)
    except (RuntimeError, ValueError) as exc:
        raise FitFailed(f"gaussian fit did not converge: {exc}") from None
    sigma = abs(popt[2]) * scale
    if not np.isfinite(sigma) or sigma == 0:
        raise FitFailed("gaussian fit returned a degenerate width")
    return GAUSS_FWHM_PER_SIGMA * sigma, x0 + popt[1] * scale


def spectrum_fwhm(x, y, fit="gaussian_fit"):
    """Evaluate both extractors and return a FWHMResult for ``fit``."""
    if fit not in ("gaussian_fit", "halfmax_interp"):
        raise ValueError(f"unknown fit {fit!r}")
    hm, (xl, xr) = halfmax_fwhm(x, y, return_edges=True)
    g, centre = gaussian_fit(x, y)
    value = g if fit == "gaussian_fit" else hm
    return FWHMResult(value=value, method=fit, gaussian=g, halfmax=hm, centre=centre)
