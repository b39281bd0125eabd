"""
Search for group-velocity-matched operating points.

For a target output wavelength the input and pump wavelengths are tied by
energy conservation, which leaves one free variable. The mismatch
1/v_g(in) - 1/v_g(pump) is scanned along that curve (128 samples), sign
changes are bracketed, and each bracket is solved with Brent's method
(bisection safeguarded secant/inverse-quadratic steps).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .dispersion import inverse_group_velocity
from .errors import NoRoot, OutOfValidityRange
from .phasematching import ProcessSpec, solve_poling_period

SCAN_SAMPLES = 128
GVM_TOL = 1e-13  # s/m


@dataclass(frozen=True)
class Materials:
    input: object
    pump: object
    output: object


@dataclass(frozen=True)
class OperatingPoint:
    lambda_in: float
    lambda_pump: float
    lambda_out: float
    temperature: float
    residual_gvm: float
    poling_period: Optional[float]
    process: str = "sfg"
    tolerance: float = GVM_TOL


def partner_wavelength(lambda_in, lambda_out, process="sfg"):
    """Pump wavelength that sends ``lambda_in`` to ``lambda_out``.

    SFG: 1/out = 1/in + 1/pump. DFG: 1/out = 1/in - 1/pump.
    """
    lambda_in = np.asarray(lambda_in, dtype=float)
    if process == "sfg":
        return 1.0 / (1.0 / lambda_out - 1.0 / lambda_in)
    if process == "dfg":
        return 1.0 / (1.0 / lambda_in - 1.0 / lambda_out)
    raise ValueError(f"process must be 'sfg' or 'dfg', got {process!r}")


def gvm_along_constraint(materials, temperature, lambda_out, lambda_in, process="sfg"):
    lam_p = partner_wavelength(lambda_in, lambda_out, process)
    return inverse_group_velocity(materials.input, lambda_in, temperature) - inverse_group_velocity(
        materials.pump, lam_p, temperature
    )


def _input_window(materials, lambda_out, process, margin=1e-5):
    """Input wavelengths for which input and pump stay inside validity (nm)."""
    lo_i, hi_i = (x * 1e3 for x in materials.input.wavelength_range)
    lo_p, hi_p = (x * 1e3 for x in materials.pump.wavelength_range)
    if process == "sfg":
        # pump = 1/(1/out - 1/in) falls monotonically as in grows (in > out)
        if hi_p <= lambda_out:
            raise NoRoot(f"pump validity ends below the target {lambda_out} nm")
        lo = max(lo_i, 1.0 / (1.0 / lambda_out - 1.0 / hi_p))
        hi = min(hi_i, 1.0 / (1.0 / lambda_out - 1.0 / lo_p)) if lo_p > lambda_out else hi_i
    else:
        # pump = 1/(1/in - 1/out) increases with in (for in < out)
        lo = lo_i
        hi = min(hi_i, lambda_out)
        lo = max(lo, 1.0 / (1.0 / lo_p + 1.0 / lambda_out))
        hi = min(hi, 1.0 / (1.0 / hi_p + 1.0 / lambda_out))
    lo, hi = lo * (1 + margin), hi * (1 - margin)
    if not lo < hi:
        raise NoRoot(f"no input wavelength keeps both fields inside validity for target {lambda_out} nm")
    return lo, hi


def find_gvm_points(materials, temperature, lambda_out, process="sfg", lambda_in_range=None, samples=SCAN_SAMPLES):
    """Every zero-GVM input wavelength along the constraint curve, ascending.

    Returns ``(roots, scanned_gvm_range)``.
    """
    window = _input_window(materials, lambda_out, process)
    if lambda_in_range is not None:
        window = (max(window[0], lambda_in_range[0]), min(window[1], lambda_in_range[1]))
        if not window[0] < window[1]:
            raise NoRoot(f"search range {lambda_in_range} lies outside the valid input window")
    x = np.linspace(window[0], window[1], samples)
    g = gvm_along_constraint(materials, temperature, lambda_out, x, process)
    roots = []
    for i in np.flatnonzero(g == 0):
        roots.append(float(x[i]))
    for i in np.flatnonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0):
        r = brentq(
            lambda li: gvm_along_constraint(materials, temperature, lambda_out, li, process),
            x[i], x[i + 1], xtol=1e-10, rtol=1e-15, maxiter=200,
        )
        roots.append(float(r))
    return sorted(roots), (float(g.min()), float(g.max()))


def find_gvm_point(materials, temperature, lambda_out, process="sfg", lambda_in_range=None, samples=SCAN_SAMPLES):
    """Group-velocity-matched operating point for a target output wavelength.

    When several roots exist the one nearest frequency degeneracy (input and
    pump frequencies closest) is returned; narrow ``lambda_in_range`` to pick
    another.
    """
    roots, gvm_range = find_gvm_points(materials, temperature, lambda_out, process, lambda_in_range, samples)
    if not roots:
        raise NoRoot(
            f"GVM has no sign change for target {lambda_out} nm at {temperature} C; "
            f"scanned GVM range [{gvm_range[0]:.4g}, {gvm_range[1]:.4g}] s/m"
        )
    lam_in = min(roots, key=lambda li: abs(np.log(partner_wavelength(li, lambda_out, process) / li)))
    lam_p = float(partner_wavelength(lam_in, lambda_out, process))
    residual = float(gvm_along_constraint(materials, temperature, lambda_out, lam_in, process))
    period = None
    if process == "sfg":
        spec = ProcessSpec(materials.input, materials.pump, materials.output, 1e-2, temperature, lam_in, lam_p)
        try:
            period = solve_poling_period(spec)
        except (NoRoot, OutOfValidityRange):
            period = None
    return OperatingPoint(lam_in, lam_p, float(lambda_out), float(temperature), residual, period, process)


def point_gvm(materials, point):
    """GVM re-evaluated at a returned operating point (s/m)."""
    T = point.temperature
    return float(
        inverse_group_velocity(materials.input, point.lambda_in, T)
        - inverse_group_velocity(materials.pump, point.lambda_pump, T)
    )


@dataclass(frozen=True)
class SweepSample:
    temperature: float
    lambda_out: float
    point: Optional[OperatingPoint] = None
    error: Optional[str] = None


def sweep_temperature(materials, temperatures, lambda_out, process="sfg", lambda_in_range=None):
    """Operating point for each temperature.

    ``lambda_out`` is a number or a callable of temperature. Failed samples
    are kept with their error text.
    """
    out = []
    for T in temperatures:
        target = float(lambda_out(T) if callable(lambda_out) else lambda_out)
        try:
            pt = find_gvm_point(materials, T, target, process, lambda_in_range)
            out.append(SweepSample(float(T), target, pt))
        except (NoRoot, OutOfValidityRange) as exc:
            out.append(SweepSample(float(T), target, None, f"{type(exc).__name__}: {exc}"))
    return out


def pump_trend(samples):
    """'increasing', 'decreasing', 'constant' or 'non-monotone' for lambda_pump(T)."""
    lp = np.array([s.point.lambda_pump for s in samples if s.point is not None])
    if lp.size < 2:
        return "constant"
    d = np.diff(lp)
    if np.all(d > 0):
        return "increasing"
    if np.all(d < 0):
        return "decreasing"
    if np.all(d == 0):
        return "constant"
    return "non-monotone"
