"""Uniform spectral axes and complex 2-D maps over pairs of them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dispersion import frequency_to_wavelength, wavelength_to_frequency

UNITS = ("nm", "Hz")


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform 1-D axis, either in vacuum wavelength (nm) or frequency (Hz)."""

    start: float
    stop: float
    num: int
    unit: str = "nm"

    def __post_init__(self):
        if self.unit not in UNITS:
            raise ValueError(f"unit must be one of {UNITS}, got {self.unit!r}")
        if self.num < 1:
            raise ValueError("num must be >= 1")
        if self.num > 1 and not self.stop > self.start:
            raise ValueError("stop must exceed start")
        if self.start <= 0:
            raise ValueError("axis values must be positive")

    @classmethod
    def centred(cls, centre, span, num, unit="nm"):
        return cls(centre - span / 2, centre + span / 2, num, unit)

    @property
    def values(self):
        if self.num == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, self.num)

    @property
    def step(self):
        return 0.0 if self.num == 1 else (self.stop - self.start) / (self.num - 1)

    @property
    def wavelengths(self):
        v = self.values
        return v if self.unit == "nm" else frequency_to_wavelength(v)

    @property
    def frequencies(self):
        v = self.values
        return v if self.unit == "Hz" else wavelength_to_frequency(v)

    def __len__(self):
        return self.num


def as_wavelengths(axis):
    if isinstance(axis, SpectralGrid):
        return axis.wavelengths
    return np.atleast_1d(np.asarray(axis, dtype=float))


@dataclass(frozen=True)
class ComplexMap2D:
    """Complex amplitudes; ``values[i, j]`` sits at ``axis_in[i]``, ``axis_second[j]``."""

    axis_in: SpectralGrid
    axis_second: SpectralGrid
    values: np.ndarray
    labels: tuple = ("in", "second")
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.axis_in.num, self.axis_second.num):
            raise ValueError(
                f"values shape {v.shape} does not match axes ({self.axis_in.num}, {self.axis_second.num})"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("map contains non-finite entries")

    @property
    def intensity(self):
        return np.abs(self.values) ** 2

    def marginal(self, axis=0):
        """Intensity marginal along ``axis`` (0 keeps axis_in, 1 keeps axis_second)."""
        if axis not in (0, 1):
            raise ValueError("axis must be 0 or 1")
        return self.intensity.sum(axis=1 - axis)

    def axis(self, axis):
        return self.axis_in if axis == 0 else self.axis_second
