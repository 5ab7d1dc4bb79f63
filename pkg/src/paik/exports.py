"""Delimited-text and JSON writers for every result type.

All writers are deterministic: comma separator, ``.`` decimal point, LF
line endings, UTF-8, floats rendered with ``repr`` (shortest round-trip
form), no timestamps.  Running the same computation twice must produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .noise import NoiseBudget
from .resonance import InverseDiameterFit, RadialModeSet, bessel_j0_roots
from .response import Waveform
from .sweep import SweepResult
from .types import Spectrum

_AXIS_CSV_COLUMNS = {
    "area": ("area_m2",),
    "cable_length": ("cable_length_m",),
    "receiver_impedance": ("receiver_impedance_re_ohm", "receiver_impedance_im_ohm"),
}


def _fmt(x: float) -> str:
    return repr(float(x))


def _open_csv(path: Path):
    return open(path, "w", encoding="utf-8", newline="")


def _writer(handle):
    return csv.writer(handle, lineterminator="\n")


def write_spectrum_csv(spec: Spectrum, path: str | Path) -> Path:
    """Columns: freq_hz, re, im, mag, phase_rad (value unit in the header)."""
    path = Path(path)
    with _open_csv(path) as handle:
        w = _writer(handle)
        w.writerow(["freq_hz", f"re_{spec.unit}", f"im_{spec.unit}", "mag", "phase_rad"])
        phase = np.angle(spec.values)
        for f, v, m, p in zip(spec.freqs, spec.values, spec.magnitude, phase):
            w.writerow([_fmt(f), _fmt(v.real), _fmt(v.imag), _fmt(m), _fmt(p)])
    return path


def write_waveform_csv(wave: Waveform, path: str | Path) -> Path:
    """Columns: t_s, value."""
    path = Path(path)
    with _open_csv(path) as handle:
        w = _writer(handle)
        w.writerow(["t_s", "value"])
        for t, v in zip(wave.times, wave.values):
            w.writerow([_fmt(t), _fmt(v)])
    return path


def write_noise_csv(budget: NoiseBudget, path: str | Path) -> Path:
    """Total PSD plus one column per component, all V^2/Hz."""
    path = Path(path)
    names = ("source_thermal", "receiver_thermal", "amp_voltage", "amp_current")
    with _open_csv(path) as handle:
        w = _writer(handle)
        w.writerow(["freq_hz", "total_v2_per_hz"] + [f"{n}_v2_per_hz" for n in names])
        for i, f in enumerate(budget.psd.freqs):
            row = [_fmt(f), _fmt(budget.psd.values[i].real)]
            row += [_fmt(budget.components[n].values[i].real) for n in names]
            w.writerow(row)
    return path


def write_sweep_csv(result: SweepResult, path: str | Path) -> Path:
    """Long format: one row per cell, axis columns then metric columns."""
    path = Path(path)
    header: list[str] = []
    for name in result.axis_names:
        header.extend(_AXIS_CSV_COLUMNS[name])
    header.extend(result.columns)
    with _open_csv(path) as handle:
        w = _writer(handle)
        w.writerow(header)
        for _, point, cell in result.iter_cells():
            row: list[str] = []
            for name in result.axis_names:
                value = point[name]
                if name == "receiver_impedance":
                    z = complex(value)
                    row += [_fmt(z.real), _fmt(z.imag)]
                else:
                    row.append(_fmt(value))
            row += [_fmt(cell[c]) for c in result.columns]
            w.writerow(row)
    return path


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    return float(value)


def write_sweep_json(result: SweepResult, path: str | Path) -> Path:
    """Nested export: axes, columns, value tensor, normalization record."""
    path = Path(path)
    doc = {
        "axes": {
            name: [_jsonable(v) for v in values]
            for name, values in zip(result.axis_names, result.axis_values)
        },
        "axis_order": list(result.axis_names),
        "metric": result.metric,
        "columns": list(result.columns),
        "values": result.values.tolist(),
        "normalization": None,
    }
    if result.normalization is not None:
        doc["normalization"] = {
            "reference_point": {
                k: _jsonable(v) for k, v in result.normalization["reference_point"].items()
            },
            "reference_value": result.normalization["reference_value"],
        }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_modes_csv(modes: RadialModeSet, path: str | Path) -> Path:
    """Columns: n, j0_n, f_n_hz."""
    path = Path(path)
    roots = bessel_j0_roots(len(modes.modes))
    with _open_csv(path) as handle:
        w = _writer(handle)
        w.writerow(["n", "j0_n", "f_n_hz"])
        for mode, root in zip(modes.modes, roots):
            w.writerow([str(mode.n), _fmt(root), _fmt(mode.f_n)])
    return path


def write_fit_points_csv(points: list[tuple[float, float]], path: str | Path) -> Path:
    """Columns: diameter_m, inv_diameter_per_m, f_lowest_hz."""
    path = Path(path)
    with _open_csv(path) as handle:
        w = _writer(handle)
        w.writerow(["diameter_m", "inv_diameter_per_m", "f_lowest_hz"])
        for d, f in points:
            w.writerow([_fmt(d), _fmt(1.0 / d), _fmt(f)])
    return path


def write_fit_json(fit: InverseDiameterFit, path: str | Path) -> Path:
    path = Path(path)
    doc = {
        "slope_hz_m": fit.slope,
        "intercept_hz": fit.intercept,
        "r_squared": fit.r_squared,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
