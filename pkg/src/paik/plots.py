"""Static SVG figures for the report path.

Rendering is forced onto the Agg backend and stripped of every varying
input (creation date, hash salt) so that rerunning a command regenerates
byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import InvalidParameterError
from .noise import NoiseBudget
from .response import Waveform
from .sweep import SweepResult
from .types import Spectrum

plt.rcParams["svg.hashsalt"] = "paik"

_SAVE_KWARGS = {"format": "svg", "metadata": {"Date": None}}


def save_spectrum_plot(spec: Spectrum, path: str | Path, title: str | None = None) -> Path:
    """Magnitude and phase panels against frequency in MHz."""
    path = Path(path)
    fig, (ax_mag, ax_ph) = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    f_mhz = spec.freqs / 1e6
    ax_mag.plot(f_mhz, spec.magnitude, lw=1.2)
    ax_mag.set_ylabel(f"|H| ({spec.unit})")
    ax_mag.grid(True, alpha=0.3)
    ax_ph.plot(f_mhz, np.unwrap(np.angle(spec.values)), lw=1.2, color="tab:orange")
    ax_ph.set_ylabel("phase (rad)")
    ax_ph.set_xlabel("frequency (MHz)")
    ax_ph.grid(True, alpha=0.3)
    if title:
        ax_mag.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    return path


def save_waveform_plot(wave: Waveform, path: str | Path, title: str | None = None) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.plot(wave.times * 1e6, wave.values, lw=1.0)
    ax.set_xlabel("time (us)")
    ax.set_ylabel("amplitude")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    return path


def save_noise_plot(budget: NoiseBudget, path: str | Path, title: str | None = None) -> Path:
    """Total PSD and components on a log scale."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4))
    f_mhz = budget.psd.freqs / 1e6
    ax.semilogy(f_mhz, budget.psd.values.real, lw=1.5, label="total")
    for name, comp in sorted(budget.components.items()):
        positive = np.maximum(comp.values.real, 1e-30)
        ax.semilogy(f_mhz, positive, lw=0.9, alpha=0.8, label=name)
    ax.set_xlabel("frequency (MHz)")
    ax.set_ylabel("PSD (V^2/Hz)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    return path


def _axis_ticks(name: str, values: tuple) -> list[str]:
    if name == "receiver_impedance":
        return [f"{complex(v).real:g}{complex(v).imag:+g}j" for v in values]
    if name == "area":
        return [f"{float(v) * 1e6:.3g}" for v in values]
    return [f"{float(v):g}" for v in values]


_AXIS_LABELS = {
    "area": "area (mm^2)",
    "cable_length": "cable length (m)",
    "receiver_impedance": "receiver impedance (ohm)",
}


def save_sweep_plot(result: SweepResult, path: str | Path, title: str | None = None) -> Path:
    """Heatmap of the leading metric column (or a line for 1-axis sweeps)."""
    path = Path(path)
    live = [k for k, vals in enumerate(result.axis_values) if len(vals) > 1]
    if len(live) > 2:
        raise InvalidParameterError("sweep plot supports at most two non-trivial axes")
    primary = result.values[..., 0]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if len(live) <= 1:
        k = live[0] if live else 0
        shaped = np.moveaxis(primary, k, 0).reshape(len(result.axis_values[k]), -1)[:, 0]
        name = result.axis_names[k]
        ticks = _axis_ticks(name, result.axis_values[k])
        ax.plot(range(len(ticks)), shaped, "o-", lw=1.2)
        ax.set_xticks(range(len(ticks)), ticks, rotation=30, ha="right", fontsize=8)
        ax.set_xlabel(_AXIS_LABELS[name])
        ax.set_ylabel(result.primary_column)
        ax.grid(True, alpha=0.3)
    else:
        ky, kx = live
        other = [k for k in range(primary.ndim) if k not in (ky, kx)]
        grid2d = primary
        for k in sorted(other, reverse=True):
            grid2d = np.take(grid2d, 0, axis=k)
        name_y = result.axis_names[ky]
        name_x = result.axis_names[kx]
        mesh = ax.pcolormesh(grid2d, shading="auto", cmap="viridis")
        ax.set_xticks(
            np.arange(grid2d.shape[1]) + 0.5,
            _axis_ticks(name_x, result.axis_values[kx]),
            rotation=30,
            ha="right",
            fontsize=8,
        )
        ax.set_yticks(
            np.arange(grid2d.shape[0]) + 0.5,
            _axis_ticks(name_y, result.axis_values[ky]),
            fontsize=8,
        )
        ax.set_xlabel(_AXIS_LABELS[name_x])
        ax.set_ylabel(_AXIS_LABELS[name_y])
        fig.colorbar(mesh, ax=ax, label=result.primary_column)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    return path
