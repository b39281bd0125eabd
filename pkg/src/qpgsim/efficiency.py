"""
Efficiency accounting: Klyshko estimators, depletion-based internal
efficiency, detector-corrected external efficiency, the spectral-filter
baseline and a sin^2 pump-power response model.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from .errors import InvalidOrdering

CSV_HEADER = ("trials", "P_h", "P_cc", "P_1", "P_2", "P_cc12")


class NegativeEfficiencyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Estimate:
    """A value with its standard error and an optional warning tag."""

    value: float
    stderr: float = 0.0
    warning: Optional[str] = None

    def __float__(self):
        return float(self.value)


def _value(x):
    return (x.value, x.stderr) if isinstance(x, Estimate) else (float(x), 0.0)


def _fraction(name, x):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name}={x!r} is not a fraction in [0, 1]")


@dataclass(frozen=True)
class CountStatistics:
    """Herald-gated click probabilities per trial.

    ``P_cc`` is the herald/signal coincidence with the signal arm read as a
    whole (either splitter output); ``P_1``, ``P_2`` and ``P_cc12`` are
    coincidences of the herald with output 1, output 2 and both outputs.
    ``trials == 0`` marks exact (non-sampled) probabilities.
    """

    trials: int
    P_h: float
    P_cc: float
    P_1: float = 0.0
    P_2: float = 0.0
    P_cc12: float = 0.0

    def __post_init__(self):
        for f in fields(self)[1:]:
            _fraction(f.name, getattr(self, f.name))
        tol = 1e-12
        if self.P_cc > self.P_h + tol:
            raise ValueError("P_cc exceeds P_h")
        if self.P_cc12 > min(self.P_1, self.P_2) + tol:
            raise ValueError("P_cc12 exceeds a single-arm coincidence")
        if max(self.P_1, self.P_2) > self.P_cc + tol:
            raise ValueError("single-arm coincidence exceeds P_cc")

    def scaled(self, factor):
        """Same ratios with every probability multiplied by ``factor``."""
        return CountStatistics(
            self.trials, *(getattr(self, f.name) * factor for f in fields(self)[1:])
        )

    def to_row(self):
        return asdict(self)


def write_count_statistics(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
        w.writeheader()
        for r in records:
            row = r.to_row()
            w.writerow({k: (row[k] if k == "trials" else repr(float(row[k]))) for k in CSV_HEADER})


def read_count_statistics(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: header must be {','.join(CSV_HEADER)}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            try:
                out.append(CountStatistics(int(row["trials"]), *(float(row[k]) for k in CSV_HEADER[1:])))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
        return out


def klyshko(stats):
    """Klyshko efficiency P_cc / P_h with a binomial standard error."""
    if stats.P_h == 0:
        raise ZeroDivisionError("herald probability is zero")
    eta = stats.P_cc / stats.P_h
    n_herald = stats.trials * stats.P_h
    se = np.sqrt(eta * (1 - eta) / n_herald) if n_herald > 0 else 0.0
    return Estimate(eta, float(se))


def internal_efficiency(eta_open, eta_blocked):
    """Depletion estimate 1 - eta_open / eta_blocked.

    Accepts floats or Estimates (errors are propagated). Negative values are
    returned unchanged with a warning.
    """
    a, sa = _value(eta_open)
    b, sb = _value(eta_blocked)
    if b == 0:
        raise ZeroDivisionError("blocked-pump Klyshko efficiency is zero")
    eta = 1.0 - a / b
    se = float(np.hypot(sa / b, a * sb / b**2))
    tag = None
    if eta < 0:
        tag = "negative internal efficiency (noise)"
        warnings.warn(tag, NegativeEfficiencyWarning, stacklevel=2)
    return Estimate(eta, se, tag)


def external_efficiency(eta_c, eta_u, det_converted, det_reference):
    """eta_c * det_reference / (eta_u * det_converted).

    ``det_reference`` is the detector efficiency for the unconverted light,
    ``det_converted`` the one for the converted light.
    """
    if eta_u == 0 or det_converted == 0:
        raise ZeroDivisionError("external efficiency denominator is zero")
    return eta_c * det_reference / (eta_u * det_converted)


def coupling_corrected(eta_ext, coupling_converted, coupling_reference):
    """Remove the fibre-coupling penalty of the converted mode."""
    if coupling_converted == 0:
        raise ZeroDivisionError("converted fibre coupling is zero")
    return eta_ext * coupling_reference / coupling_converted


def filter_baseline(input_fwhm, output_fwhm):
    """Throughput of a lossless filter narrowing ``input_fwhm`` to ``output_fwhm``.

    Ratio model: output / input.
    """
    if not (input_fwhm > 0 and output_fwhm > 0):
        raise ValueError("bandwidths must be positive")
    if output_fwhm > input_fwhm:
        raise InvalidOrdering("output bandwidth exceeds input bandwidth")
    return output_fwhm / input_fwhm


def filter_baseline_gaussian(input_fwhm, output_fwhm):
    """Gaussian spectrum through a unit-peak Gaussian filter.

    The filter has intensity FWHM ``output_fwhm``. Returns the fraction of
    the input photon flux transmitted.
    """
    if not (input_fwhm > 0 and output_fwhm > 0):
        raise ValueError("bandwidths must be positive")
    if output_fwhm > input_fwhm:
        raise InvalidOrdering("output bandwidth exceeds input bandwidth")
    return output_fwhm / np.hypot(input_fwhm, output_fwhm)


def filter_baselines(input_fwhm, output_fwhm):
    return {
        "ratio": filter_baseline(input_fwhm, output_fwhm),
        "gaussian": filter_baseline_gaussian(input_fwhm, output_fwhm),
    }


# sin^2 response: an extrapolation model, calibrated from one operating point.


def pump_power_response(theta):
    if np.any(np.asarray(theta) < 0):
        raise ValueError("coupling strength must be non-negative")
    return np.sin(theta) ** 2


@dataclass(frozen=True)
class PumpCalibration:
    """theta = k * sqrt(pulse_energy), calibrated on one (energy, efficiency) pair."""

    k: float

    @classmethod
    def from_point(cls, pulse_energy, efficiency):
        if not 0 < efficiency <= 1:
            raise ValueError("efficiency must be in (0, 1]")
        return cls(np.arcsin(np.sqrt(efficiency)) / np.sqrt(pulse_energy))

    def efficiency(self, pulse_energy):
        return pump_power_response(self.k * np.sqrt(pulse_energy))

    def energy_for(self, efficiency):
        """Smallest pulse energy that reaches ``efficiency`` (first sin^2 lobe)."""
        if not 0 <= efficiency <= 1:
            raise ValueError("efficiency must be in [0, 1]")
        return (np.arcsin(np.sqrt(efficiency)) / self.k) ** 2


@dataclass(frozen=True)
class EfficiencyBudget:
    internal: float
    optics_transmission: float
    waveguide_incoupling: float
    fiber_coupling_converted: float
    fiber_coupling_reference: float
    detector_efficiencies: dict

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, dict):
                for k, x in v.items():
                    _fraction(f"{f.name}.{k}", x)
            else:
                _fraction(f.name, v)

    def device_throughput(self):
        """Internal efficiency times the linear-optics factors before fibre coupling."""
        return self.internal * self.optics_transmission * self.waveguide_incoupling
