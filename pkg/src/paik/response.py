"""Band responses, impulse responses, and band metrics.

The frequency response samples h2 on a uniform grid (singularity-guarded).
The impulse response Hermitian-extends the one-sided spectrum and inverse
transforms it, with an explicit check that the imaginary residue of the
result is numerically negligible before it is discarded.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BandUnboundedError, InvalidParameterError
from .klm import guard_grid
from .transfer import h2
from .types import FrequencyGrid, ReadoutChain, Spectrum
from ._parallel import map_frequencies

Array = np.ndarray

_IMAG_RESIDUE_TOL = 1e-10


def frequency_response(
    chain: ReadoutChain, grid: FrequencyGrid, pressure_referred: bool = True
) -> Spectrum:
    """Receive transfer function sampled over the grid.

    ``pressure_referred`` converts force-referred V/N to V/Pa by
    multiplying with the element area.  A grid reaching DC is clamped to
    one bin width with a warning, since the model is undefined at 0 Hz.
    """
    f_min, f_max, n = grid.f_min, grid.f_max, grid.n_points
    if f_min <= 0.0:
        bin_width = (f_max - f_min) / (n - 1)
        warnings.warn(
            f"grid lower edge {f_min:.6g} Hz crosses DC; clamped to one bin "
            f"width ({bin_width:.6g} Hz)",
            stacklevel=2,
        )
        f_min = bin_width
    freqs = guard_grid(np.linspace(f_min, f_max, n), chain.plate)
    values = map_frequencies(lambda f: h2(2.0 * math.pi * f, chain), freqs)
    if pressure_referred:
        values = values * chain.plate.area
        unit = "V/Pa"
    else:
        unit = "V/N"
    return Spectrum(freqs, values, unit)


@dataclass(frozen=True, eq=False)
class Waveform:
    """Real time-domain record sampled at fs."""

    times: Array
    values: Array
    fs: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise InvalidParameterError("waveform times and values must be 1-D and equal length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


def impulse_response(spec: Spectrum, fs: float) -> Waveform:
    """Real impulse response of a one-sided spectrum.

    Bins are laid out on the spectrum's own spacing up to fs/2, the DC bin
    is forced to zero (the chain passes no DC), the Nyquist bin is forced
    real, and the negative half is the Hermitian mirror.  The inverse
    transform is taken complex so the imaginary residue can be verified
    against ``1e-10`` of the peak before being dropped.  Record length is
    2*(n_bins - 1) samples.
    """
    if fs < 2.0 * spec.freqs[-1]:
        raise InvalidParameterError(
            f"fs = {fs:.6g} Hz cannot represent spectrum content up to "
            f"{spec.freqs[-1]:.6g} Hz; need fs >= {2 * spec.freqs[-1]:.6g}"
        )
    diffs = np.diff(spec.freqs)
    df = float(np.median(diffs))
    if df <= 0 or np.any(np.abs(diffs - df) > 1e-6 * df):
        raise InvalidParameterError("impulse response needs a uniformly spaced spectrum")

    n_nyquist = int(round(fs / 2.0 / df))
    if abs(fs / 2.0 - n_nyquist * df) > 1e-6 * df:
        raise InvalidParameterError(
            f"fs/2 = {fs / 2.0:.6g} Hz is not an integer multiple of the spectrum "
            f"spacing {df:.6g} Hz; the record would misstate its own sample rate"
        )
    one_sided = np.zeros(n_nyquist + 1, dtype=complex)
    idx = np.rint(spec.freqs / df).astype(int)
    if np.any(np.abs(spec.freqs / df - idx) > 1e-3) or np.any(idx > n_nyquist):
        raise InvalidParameterError("spectrum frequencies do not sit on the fs/2 bin grid")
    one_sided[idx] = spec.values
    one_sided[0] = 0.0
    one_sided[-1] = one_sided[-1].real

    full = np.concatenate([one_sided, one_sided[-2:0:-1].conj()])
    h = np.fft.ifft(full)
    peak = float(np.max(np.abs(h)))
    residue = float(np.max(np.abs(h.imag)))
    if peak > 0 and residue > _IMAG_RESIDUE_TOL * peak:
        raise InvalidParameterError(
            f"imaginary residue {residue:.3e} exceeds {_IMAG_RESIDUE_TOL} of peak "
            f"{peak:.3e}; spectrum is not consistent with a real response"
        )
    n_t = full.size
    times = np.arange(n_t) / fs
    return Waveform(times=times, values=h.real, fs=fs)


def chain_impulse_response(
    chain: ReadoutChain,
    grid: FrequencyGrid,
    fs: float | None = None,
    pressure_referred: bool = True,
    max_doublings: int = 6,
) -> Waveform:
    """Impulse response of the chain with a wrap-around guard.

    The record spans 1/df; if the tail (final 10 %) still holds 5 % or more
    of the energy, the frequency resolution is doubled and the response is
    recomputed, up to ``max_doublings`` times.
    """
    if fs is None:
        fs = 2.0 * grid.f_max
    n = grid.n_points
    for _ in range(max_doublings + 1):
        g = FrequencyGrid(grid.f_min, grid.f_max, n)
        spec = frequency_response(chain, g, pressure_referred)
        wave = impulse_response(spec, fs)
        energy = float(np.sum(wave.values**2))
        tail_start = int(math.floor(0.9 * wave.values.size))
        tail = float(np.sum(wave.values[tail_start:] ** 2))
        if energy == 0.0 or tail < 0.05 * energy:
            return wave
        n = 2 * (n - 1) + 1
    warnings.warn(
        "impulse response tail energy still above 5 % of total after "
        f"{max_doublings} record doublings; returning the longest record",
        stacklevel=2,
    )
    return wave


@dataclass(frozen=True)
class BandMetrics:
    """Level-crossing band summary of a magnitude spectrum.

    ``f_lo``/``f_hi`` are the crossings adjacent to the peak; ``support_lo``
    and ``support_hi`` are the outermost crossings over the whole grid (they
    differ when side lobes re-emerge above the level).
    """

    f_lo: float
    f_hi: float
    bandwidth: float
    f_center: float
    level_db: float
    support_lo: float
    support_hi: float

    def __post_init__(self):
        if not math.isclose(self.bandwidth, self.f_hi - self.f_lo, rel_tol=1e-12, abs_tol=0.0):
            raise InvalidParameterError("bandwidth must equal f_hi - f_lo")
        if not math.isclose(self.f_center, 0.5 * (self.f_lo + self.f_hi), rel_tol=1e-12):
            raise InvalidParameterError("f_center must be the mean of the band edges")


def _cross(f_a: float, m_a: float, f_b: float, m_b: float, level: float) -> float:
    # linear interpolation of the level crossing between two bins
    if m_b == m_a:
        return f_b
    return f_a + (level - m_a) * (f_b - f_a) / (m_b - m_a)


def band_metrics(spec: Spectrum, level_db: float = -6.0) -> BandMetrics:
    """Level band around the (unique) magnitude peak.

    ``level_db = 0`` degenerates to a zero-width band at the peak.
    Raises :class:`BandUnboundedError` naming the edge if the magnitude
    never drops below the level before the grid runs out.
    """
    if level_db > 0:
        raise InvalidParameterError(f"level_db must be <= 0, got {level_db}")
    mags = spec.magnitude
    freqs = spec.freqs
    peak_idx = int(np.argmax(mags))
    peak = float(mags[peak_idx])
    if peak <= 0:
        raise InvalidParameterError("spectrum peak magnitude must be > 0")
    if int(np.count_nonzero(mags == peak)) > 1:
        raise InvalidParameterError("spectrum has no unique global peak magnitude")
    f_peak = float(freqs[peak_idx])
    if level_db == 0.0:
        return BandMetrics(f_peak, f_peak, 0.0, f_peak, 0.0, f_peak, f_peak)

    level = peak * 10.0 ** (level_db / 20.0)

    i = peak_idx
    while i > 0 and mags[i] >= level:
        i -= 1
    if mags[i] >= level:
        raise BandUnboundedError(
            f"magnitude never drops below the {level_db} dB level on the low side "
            f"of the peak before the grid edge at {freqs[0]:.6g} Hz",
            edge="low",
        )
    f_lo = _cross(freqs[i], mags[i], freqs[i + 1], mags[i + 1], level)

    i = peak_idx
    last = mags.size - 1
    while i < last and mags[i] >= level:
        i += 1
    if mags[i] >= level:
        raise BandUnboundedError(
            f"magnitude never drops below the {level_db} dB level on the high side "
            f"of the peak before the grid edge at {freqs[-1]:.6g} Hz",
            edge="high",
        )
    f_hi = _cross(freqs[i], mags[i], freqs[i - 1], mags[i - 1], level)

    above = np.nonzero(mags >= level)[0]
    j = int(above[0])
    support_lo = (
        float(freqs[0]) if j == 0 else _cross(freqs[j - 1], mags[j - 1], freqs[j], mags[j], level)
    )
    j = int(above[-1])
    support_hi = (
        float(freqs[-1]) if j == last else _cross(freqs[j + 1], mags[j + 1], freqs[j], mags[j], level)
    )

    return BandMetrics(
        f_lo=f_lo,
        f_hi=f_hi,
        bandwidth=f_hi - f_lo,
        f_center=0.5 * (f_lo + f_hi),
        level_db=level_db,
        support_lo=support_lo,
        support_hi=support_hi,
    )
