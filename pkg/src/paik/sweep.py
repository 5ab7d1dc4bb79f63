"""Parameter sweeps over element area, cable length and receiver impedance.

A sweep clones a template chain with substituted parameters at every point
of a Cartesian grid and evaluates one metric per cell.  Axis order is
fixed (area, cable_length, receiver_impedance) so cell ordering, CSV row
order and the value tensor layout are all deterministic.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from .errors import BandUnboundedError, InvalidParameterError, SingularFrequencyError
from .noise import Excitation, snr
from .response import band_metrics, frequency_response
from .transfer import H1Inputs, h1
from .types import FrequencyGrid, ReadoutChain
from ._parallel import thread_count

AXIS_ORDER = ("area", "cable_length", "receiver_impedance")
METRICS = ("h1_mag_at_f", "h2_band", "snr")

_METRIC_COLUMNS = {
    "h1_mag_at_f": ("sensitivity",),
    "h2_band": ("sensitivity", "bandwidth_hz", "center_hz"),
    "snr": ("snr",),
}


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Metric values on a parameter grid.

    ``values`` has one trailing axis over ``columns``; the leading axes
    follow ``axis_names``.  Cells that hit a singular frequency or an
    unbounded band hold NaN.  ``normalization`` records the reference
    point and the value every sensitivity was divided by, or None.
    """

    axis_names: tuple[str, ...]
    axis_values: tuple[tuple, ...]
    metric: str
    columns: tuple[str, ...]
    values: np.ndarray
    normalization: dict | None = None

    def __post_init__(self):
        expected = tuple(len(v) for v in self.axis_values) + (len(self.columns),)
        if self.values.shape != expected:
            raise InvalidParameterError(
                f"value tensor shape {self.values.shape} does not match axes {expected}"
            )

    @property
    def primary_column(self) -> str:
        return self.columns[0]

    def cell(self, indices: tuple[int, ...]) -> dict[str, float]:
        row = self.values[indices]
        return dict(zip(self.columns, (float(x) for x in row)))

    def point(self, indices: tuple[int, ...]) -> dict[str, object]:
        return {
            name: self.axis_values[k][indices[k]] for k, name in enumerate(self.axis_names)
        }

    def iter_cells(self) -> Iterator[tuple[tuple[int, ...], dict, dict]]:
        """Yield (indices, point, cell) in deterministic row-major order."""
        for indices in itertools.product(*(range(len(v)) for v in self.axis_values)):
            yield indices, self.point(indices), self.cell(indices)


def _axis_list(axes: dict, name: str) -> tuple:
    values = axes[name]
    if len(values) == 0:
        raise InvalidParameterError(f"axis {name!r} is empty")
    if name == "receiver_impedance":
        return tuple(complex(v) for v in values)
    out = tuple(float(v) for v in values)
    if any(v <= 0 for v in out):
        raise InvalidParameterError(f"axis {name!r} values must be > 0")
    return out


def _substitute(chain: ReadoutChain, point: dict) -> ReadoutChain:
    out = chain
    if "area" in point:
        out = out.with_area(point["area"])
    if "cable_length" in point:
        out = out.with_cable_length(point["cable_length"])
    if "receiver_impedance" in point:
        out = out.with_receiver(point["receiver_impedance"])
    return out


def _evaluate(
    chain: ReadoutChain,
    metric: str,
    f: float | None,
    grid: FrequencyGrid | None,
    excitation: Excitation | None,
    band: tuple[float, float] | None,
    level_db: float,
) -> tuple[float, ...]:
    if metric == "h1_mag_at_f":
        omega = 2.0 * math.pi * f
        return (abs(h1(omega, H1Inputs.from_chain(omega, chain))),)
    if metric == "h2_band":
        spec = frequency_response(chain, grid)
        metrics = band_metrics(spec, level_db=level_db)
        return (float(np.max(spec.magnitude)), metrics.bandwidth, metrics.f_center)
    if metric == "snr":
        return (snr(chain, excitation, grid, band),)
    raise InvalidParameterError(f"unknown metric {metric!r}; expected one of {METRICS}")


def sweep_grid(
    chain_template: ReadoutChain,
    axes: dict,
    metric: str,
    f: float | None = None,
    grid: FrequencyGrid | None = None,
    excitation: Excitation | None = None,
    band: tuple[float, float] | None = None,
    level_db: float = -6.0,
) -> SweepResult:
    """Evaluate a metric over the Cartesian grid of the given axes.

    Parameters
    ----------
    chain_template : ReadoutChain
        Base chain; each cell substitutes its point into a copy.
    axes : dict
        Keys from ``area`` (m^2), ``cable_length`` (m),
        ``receiver_impedance`` (ohm); values are lists.
    metric : str
        ``h1_mag_at_f`` needs ``f``; ``h2_band`` needs ``grid``;
        ``snr`` needs ``grid`` and uses a unit-pressure flat excitation
        unless one is given.

    Cells whose evaluation hits a singular frequency or an unbounded band
    are marked NaN and the sweep continues.
    """
    unknown = sorted(set(axes) - set(AXIS_ORDER))
    if unknown:
        raise InvalidParameterError(f"unknown sweep axes {unknown}; expected {AXIS_ORDER}")
    if not axes:
        raise InvalidParameterError("axes must name at least one parameter")
    if metric not in METRICS:
        raise InvalidParameterError(f"unknown metric {metric!r}; expected one of {METRICS}")
    if metric == "h1_mag_at_f":
        if f is None or not f > 0:
            raise InvalidParameterError("metric h1_mag_at_f needs a frequency f > 0")
    elif grid is None:
        raise InvalidParameterError(f"metric {metric} needs a frequency grid")
    if metric == "snr" and excitation is None:
        excitation = Excitation(pressure_pa=1.0)

    names = tuple(n for n in AXIS_ORDER if n in axes)
    axis_values = tuple(_axis_list(axes, n) for n in names)
    columns = _METRIC_COLUMNS[metric]
    shape = tuple(len(v) for v in axis_values)
    values = np.full(shape + (len(columns),), np.nan)

    index_grid = list(itertools.product(*(range(s) for s in shape)))

    def run_cell(indices: tuple[int, ...]) -> tuple[float, ...] | None:
        point = {name: axis_values[k][indices[k]] for k, name in enumerate(names)}
        try:
            variant = _substitute(chain_template, point)
            return _evaluate(variant, metric, f, grid, excitation, band, level_db)
        except (SingularFrequencyError, BandUnboundedError) as exc:
            warnings.warn(f"sweep cell {point} marked invalid: {exc}", stacklevel=3)
            return None

    n_threads = thread_count()
    if n_threads > 1 and len(index_grid) >= 2:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(run_cell, index_grid))
    else:
        results = [run_cell(ix) for ix in index_grid]

    for indices, row in zip(index_grid, results):
        if row is not None:
            values[indices] = row

    return SweepResult(
        axis_names=names,
        axis_values=axis_values,
        metric=metric,
        columns=columns,
        values=values,
    )


def _locate(result: SweepResult, reference_point: dict) -> tuple[int, ...]:
    extra = sorted(set(reference_point) - set(result.axis_names))
    if extra:
        raise InvalidParameterError(f"reference point names unknown axes {extra}")
    indices = []
    for k, name in enumerate(result.axis_names):
        if name not in reference_point:
            raise InvalidParameterError(f"reference point must fix axis {name!r}")
        target = reference_point[name]
        axis = result.axis_values[k]
        matches = [i for i, v in enumerate(axis) if v == target] or [
            i
            for i, v in enumerate(axis)
            if math.isclose(abs(complex(v) - complex(target)), 0.0, abs_tol=1e-12 * max(1.0, abs(complex(target))))
        ]
        if not matches:
            raise InvalidParameterError(
                f"reference value {target!r} not found on axis {name!r}"
            )
        indices.append(matches[0])
    return tuple(indices)


def normalize(result: SweepResult, reference_point: dict) -> SweepResult:
    """Divide the leading metric column by its value at the reference cell.

    The reference cell becomes exactly 1; band edges and widths keep their
    units.  Normalizing an already normalized result again is a no-op only
    when the same reference is used (the reference value is then 1).
    """
    indices = _locate(result, reference_point)
    ref_value = float(result.values[indices][0])
    if not np.isfinite(ref_value) or ref_value == 0.0:
        raise InvalidParameterError(
            f"reference cell at {reference_point} holds {ref_value}; cannot normalize"
        )
    values = result.values.copy()
    values[..., 0] = values[..., 0] / ref_value
    return replace(
        result,
        values=values,
        normalization={
            "reference_point": dict(reference_point),
            "reference_value": ref_value,
        },
    )


def _coarse_unimodal(values: list[float]) -> bool:
    # one rise then one fall (either possibly empty), flats allowed
    diffs = np.diff(values)
    signs = [int(np.sign(d)) for d in diffs if d != 0]
    collapsed = [s for i, s in enumerate(signs) if i == 0 or s != signs[i - 1]]
    return collapsed in ([], [1], [-1], [1, -1])


def optimal_cable_length(
    chain: ReadoutChain,
    cl_range: tuple[float, float],
    f: float,
    resolution: float = 1e-3,
    coarse_points: int = 41,
) -> dict[str, float]:
    """Cable length maximizing |H1| at one frequency.

    Golden-section search refined to ``resolution`` (1 mm by default).  A
    coarse scan first checks unimodality and warns when the profile has
    multiple local maxima, in which case the search still returns a local
    optimum.  A monotone profile lands on the range boundary.  Returns a
    dict with ``cl_opt`` (m) and ``sensitivity`` (the |H1| value there).
    """
    lo, hi = float(cl_range[0]), float(cl_range[1])
    if lo < 0 or hi < lo:
        raise InvalidParameterError(f"invalid cable length range [{lo}, {hi}]")
    if not f > 0:
        raise InvalidParameterError(f"f must be > 0, got {f}")
    omega = 2.0 * math.pi * f

    def sens(length: float) -> float:
        variant = chain.with_cable_length(length)
        return abs(h1(omega, H1Inputs.from_chain(omega, variant)))

    if hi == lo:
        return {"cl_opt": lo, "sensitivity": sens(lo)}

    coarse = np.linspace(lo, hi, coarse_points)
    coarse_vals = [sens(float(x)) for x in coarse]
    if not _coarse_unimodal(coarse_vals):
        warnings.warn(
            "|H1|(cable length) is not unimodal on the range; golden-section "
            "search returns a local optimum",
            stacklevel=2,
        )

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = sens(c), sens(d)
    while b - a > resolution:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = sens(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = sens(d)
    candidates = [(sens(lo), lo), (sens(hi), hi)]
    mid = 0.5 * (a + b)
    candidates.append((sens(mid), mid))
    best_val, best_cl = max(candidates, key=lambda t: t[0])
    return {"cl_opt": best_cl, "sensitivity": best_val}
