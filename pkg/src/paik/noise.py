"""Output-referred noise budget and signal-to-noise ratio.

All densities are voltage PSDs in V^2/Hz at the receiver input node, before
any amplifier gain, so gain cancels out of every ratio built from them.

The chain presents a source impedance Z_src to the receiver (the plate and
cable looking back, acoustic faces terminated).  Thermal noise of that
source reaches the node through the divider Zr/(Z_src + Zr); thermal noise
of the receiver resistance reaches it through Z_src/(Z_src + Zr).  The two
shaped terms sum to 4kT Re(Z_src || Zr), which doubles as a cross-check.
Amplifier voltage noise adds e_n^2 directly and current noise adds
i_n^2 |Z_src || Zr|^2.  Flicker and shot contributions are left out; they
are far below the thermal floor for the impedance levels involved.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InfiniteSnrError, InvalidParameterError
from .klm import guard_grid
from .transfer import electrical_input_impedance, h2
from .types import FrequencyGrid, ReadoutChain, Spectrum
from ._parallel import map_frequencies

BOLTZMANN = 1.380649e-23
DEFAULT_TEMPERATURE = 293.0

_COMPONENT_NAMES = ("source_thermal", "receiver_thermal", "amp_voltage", "amp_current")


@dataclass(frozen=True, eq=False)
class NoiseBudget:
    """Total noise PSD and its additive components on a common grid.

    ``components`` maps source_thermal, receiver_thermal, amp_voltage and
    amp_current to spectra that sum bin by bin to ``psd``.
    """

    psd: Spectrum
    components: dict[str, Spectrum]

    def __post_init__(self):
        missing = [n for n in _COMPONENT_NAMES if n not in self.components]
        if missing:
            raise InvalidParameterError(f"missing noise components: {missing}")
        total = sum(self.components[n].values.real for n in _COMPONENT_NAMES)
        if not np.allclose(total, self.psd.values.real, rtol=1e-12, atol=0.0):
            raise InvalidParameterError("noise components do not sum to the total psd")

    def band_avg(self, f_lo: float | None = None, f_hi: float | None = None) -> float:
        """Mean PSD over [f_lo, f_hi] in V^2/Hz (whole grid by default)."""
        f_lo = self.psd.freqs[0] if f_lo is None else f_lo
        f_hi = self.psd.freqs[-1] if f_hi is None else f_hi
        part = self.psd.restricted(f_lo, f_hi)
        return float(np.mean(part.values.real))


def node_noise_terms(
    z_src: complex,
    z_receiver: complex,
    e_n: float = 0.0,
    i_n: float = 0.0,
    temperature_k: float = DEFAULT_TEMPERATURE,
) -> tuple[float, float, float, float]:
    """Single-bin PSD terms (source thermal, receiver thermal, e_n, i_n).

    Both impedances in ohms; returns V^2/Hz at the node between them.
    """
    den = z_src + z_receiver
    if abs(den) == 0.0:
        raise InvalidParameterError("source and receiver impedances cancel")
    four_kt = 4.0 * BOLTZMANN * temperature_k
    z_eq = z_src * z_receiver / den
    return (
        four_kt * max(z_src.real, 0.0) * abs(z_receiver / den) ** 2,
        four_kt * max(z_receiver.real, 0.0) * abs(z_src / den) ** 2,
        e_n**2,
        i_n**2 * abs(z_eq) ** 2,
    )


def noise_psd(
    chain: ReadoutChain, grid: FrequencyGrid, temperature_k: float = DEFAULT_TEMPERATURE
) -> NoiseBudget:
    """Noise budget of the chain at the receiver input node.

    A receiver without amplifier noise data contributes thermal terms only;
    a warning notes that the amplifier rows are zero.
    """
    if temperature_k < 0:
        raise InvalidParameterError(f"temperature_k must be >= 0, got {temperature_k}")
    amp = chain.receiver.amp_noise
    if amp is None:
        warnings.warn(
            "receiver has no amplifier noise data; amp_voltage and amp_current "
            "components are zero",
            stacklevel=2,
        )
        e_n = i_n = 0.0
    else:
        e_n, i_n = amp.e_n, amp.i_n

    freqs = guard_grid(grid.frequencies(), chain.plate)

    rows = np.empty((freqs.size, 4))
    for i, f in enumerate(freqs):
        omega = 2.0 * math.pi * float(f)
        z_src = electrical_input_impedance(omega, chain, look_from="receiver")
        z_r = chain.receiver.impedance_at(float(f))
        rows[i] = node_noise_terms(z_src, z_r, e_n, i_n, temperature_k)

    components = {
        name: Spectrum(freqs, rows[:, j].astype(complex), "V^2/Hz")
        for j, name in enumerate(_COMPONENT_NAMES)
    }
    total = Spectrum(freqs, rows.sum(axis=1).astype(complex), "V^2/Hz")
    return NoiseBudget(psd=total, components=components)


@dataclass(frozen=True)
class Excitation:
    """Incident-pressure drive for SNR: peak amplitude and spectral shape.

    ``shape`` multiplies the flat amplitude by a dimensionless weight per
    frequency; None means flat across the band.
    """

    pressure_pa: float
    shape: Callable[[float], float] | None = None

    def __post_init__(self):
        if not self.pressure_pa > 0:
            raise InvalidParameterError(f"pressure_pa must be > 0, got {self.pressure_pa}")

    def weight(self, f_hz: float) -> float:
        return 1.0 if self.shape is None else float(self.shape(f_hz))


def snr(
    chain: ReadoutChain,
    excitation: Excitation,
    grid: FrequencyGrid,
    band: tuple[float, float] | None = None,
    temperature_k: float = DEFAULT_TEMPERATURE,
) -> float:
    """Peak signal over rms noise, both referred to the receiver node.

    The signal is the peak over the band of |H2| times area times the
    excitation pressure (with its spectral weight); the noise is the rms
    voltage from the PSD integrated over the same band.
    """
    f_lo, f_hi = band if band is not None else (grid.f_min, grid.f_max)
    if not (grid.f_min <= f_lo < f_hi <= grid.f_max):
        raise InvalidParameterError(
            f"band [{f_lo:.6g}, {f_hi:.6g}] Hz must lie inside the grid "
            f"[{grid.f_min:.6g}, {grid.f_max:.6g}] Hz"
        )
    freqs = guard_grid(grid.frequencies(), chain.plate)
    response = map_frequencies(lambda f: h2(2.0 * math.pi * f, chain), freqs)
    weights = np.array([excitation.weight(float(f)) for f in freqs])
    signal = np.abs(response) * chain.plate.area * excitation.pressure_pa * weights

    budget = noise_psd(chain, grid, temperature_k)
    in_band = (freqs >= f_lo) & (freqs <= f_hi)
    noise_power = float(np.trapezoid(budget.psd.values.real[in_band], freqs[in_band]))
    if noise_power <= 0.0:
        raise InfiniteSnrError(
            "integrated noise power is zero; snr is unbounded for any signal"
        )
    return float(np.max(signal[in_band])) / math.sqrt(noise_power)
