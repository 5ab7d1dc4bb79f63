"""Radial plate resonances and the inverse-diameter regression.

The thickness-mode circuit assumes lateral uniformity.  A finite disc also
rings radially, at frequencies set by the shear velocity, the diameter and
the zeros of the order-zero Bessel function:

    f_n = v_s j_{0,n} / (pi d)

These modes sit well below the thickness band and show up as extra
low-frequency structure that the 1D model cannot produce.  This module
predicts where they land so such bands can be flagged or notched; nothing
here feeds back into the transfer functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import jn_zeros

from .errors import DegenerateFitError, InvalidParameterError
from .response import band_metrics
from .types import Spectrum


def bessel_j0_roots(count: int) -> np.ndarray:
    """First `count` positive zeros of the order-zero Bessel function."""
    if count < 1:
        raise InvalidParameterError(f"count must be >= 1, got {count}")
    return jn_zeros(0, count)


@dataclass(frozen=True)
class RadialMode:
    n: int
    f_n: float


@dataclass(frozen=True)
class RadialModeSet:
    """Radial resonance ladder of one disc."""

    diameter: float
    v_shear: float
    modes: tuple[RadialMode, ...]

    def __post_init__(self):
        freqs = [m.f_n for m in self.modes]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise InvalidParameterError("radial mode frequencies must increase with n")

    def frequencies(self) -> np.ndarray:
        return np.array([m.f_n for m in self.modes])


def radial_modes(diameter: float, v_shear: float, count: int = 5) -> RadialModeSet:
    """Radial resonance frequencies of a disc.

    Parameters
    ----------
    diameter : float
        Plate diameter in m.
    v_shear : float
        Shear wave velocity in m/s.
    count : int
        Number of modes, lowest first.
    """
    if not diameter > 0:
        raise InvalidParameterError(f"diameter must be > 0, got {diameter}")
    if not v_shear > 0:
        raise InvalidParameterError(f"v_shear must be > 0, got {v_shear}")
    roots = bessel_j0_roots(count)
    modes = tuple(
        RadialMode(n=i + 1, f_n=v_shear * float(r) / (math.pi * diameter))
        for i, r in enumerate(roots)
    )
    return RadialModeSet(diameter=diameter, v_shear=v_shear, modes=modes)


def lowest_resonance(spec: Spectrum, search_band: tuple[float, float]) -> float:
    """Center of the -6 dB band of the strongest peak inside a search band.

    Intended for picking the fundamental radial mode out of a measured or
    simulated low-frequency spectrum.
    """
    f_lo, f_hi = search_band
    part = spec.restricted(f_lo, f_hi)
    if part.freqs.size < 3:
        raise InvalidParameterError(
            f"search band [{f_lo:.6g}, {f_hi:.6g}] Hz covers fewer than 3 bins"
        )
    return band_metrics(part, level_db=-6.0).f_center


@dataclass(frozen=True)
class InverseDiameterFit:
    """Least-squares line of lowest resonance versus 1/diameter."""

    slope: float
    intercept: float
    r_squared: float


def fit_inverse_diameter(points: list[tuple[float, float]]) -> InverseDiameterFit:
    """Ordinary least squares of f_lowest against 1/diameter.

    Parameters
    ----------
    points : list of (diameter, f_lowest)
        Diameters in m, resonance frequencies in Hz.  At least two distinct
        diameters are required.
    """
    if len(points) < 2:
        raise InvalidParameterError("need at least 2 points to fit a line")
    d = np.array([p[0] for p in points], dtype=float)
    f = np.array([p[1] for p in points], dtype=float)
    if np.any(d <= 0):
        raise InvalidParameterError("diameters must be > 0")
    x = 1.0 / d
    if np.ptp(x) == 0.0:
        raise DegenerateFitError("all diameters are equal; slope is undetermined")
    slope, intercept = np.polyfit(x, f, 1)
    predicted = slope * x + intercept
    ss_res = float(np.sum((f - predicted) ** 2))
    ss_tot = float(np.sum((f - np.mean(f)) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return InverseDiameterFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared)


def jittered_fit_points(
    diameters: list[float],
    v_shear: float,
    rel_jitter: float,
    rng: np.random.Generator,
) -> list[tuple[float, float]]:
    """Synthetic (diameter, f_lowest) points with relative Gaussian jitter.

    Models a batch of probes whose measured fundamentals scatter around the
    ideal line; useful for exercising the regression with realistic noise.
    """
    if rel_jitter < 0:
        raise InvalidParameterError(f"rel_jitter must be >= 0, got {rel_jitter}")
    points = []
    for d in diameters:
        f1 = radial_modes(d, v_shear, count=1).modes[0].f_n
        points.append((d, f1 * (1.0 + rel_jitter * float(rng.standard_normal()))))
    return points
