"""Value types describing a piezoelectric readout chain.

All quantities are strict SI: metres, kilograms, seconds, farads, henries,
ohms.  Acoustic impedances are stored as force impedances (N*s/m), i.e. the
specific impedance rho*v (Rayl) multiplied by the element area, so that the
acoustic and electrical sides of the network share one impedance convention.

Every type is immutable; "what if" variations are produced by the
``ReadoutChain.with_*`` helpers which return new chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParameterError

Array = np.ndarray


def _require_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise InvalidParameterError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class PiezoPlate:
    """Thickness-mode piezoelectric plate.

    Parameters
    ----------
    thickness : float
        Plate thickness L in m.
    density : float
        Mass density rho in kg/m^3.
    c33d : float
        Elastic stiffness at constant electric displacement, Pa.
    h33 : float
        Piezoelectric constant h33 in V/m (equivalently N/C).
    eps33s : float
        Clamped permittivity in F/m.
    area : float
        Element area in m^2.
    diameter : float, optional
        Element diameter in m.  When given it must agree with ``area``
        within 1 %; it is kept because radial-mode estimates need it.
    shear_velocity : float, optional
        Shear (lateral) sound speed in m/s, used only by the radial
        resonance helpers.
    """

    thickness: float
    density: float
    c33d: float
    h33: float
    eps33s: float
    area: float
    diameter: float | None = None
    shear_velocity: float | None = None

    def __post_init__(self):
        for name in ("thickness", "density", "c33d", "h33", "eps33s", "area"):
            _require_positive(f"plate.{name}", getattr(self, name))
        if self.diameter is not None:
            _require_positive("plate.diameter", self.diameter)
            implied = math.pi * (self.diameter / 2.0) ** 2
            if abs(implied - self.area) > 0.01 * self.area:
                raise InvalidParameterError(
                    f"plate.diameter {self.diameter} implies area {implied:.6e} m^2, "
                    f"which disagrees with plate.area {self.area:.6e} m^2 by more than 1 %"
                )
        if self.shear_velocity is not None:
            _require_positive("plate.shear_velocity", self.shear_velocity)

    @property
    def velocity(self) -> float:
        """Thickness-mode sound speed sqrt(c33d/rho) in m/s."""
        return math.sqrt(self.c33d / self.density)

    @property
    def half_wave_frequency(self) -> float:
        """Frequency in Hz at which the plate is one half wavelength thick."""
        return self.velocity / (2.0 * self.thickness)

    def to_dict(self) -> dict:
        d = {
            "thickness_m": self.thickness,
            "density_kg_m3": self.density,
            "stiffness_c33d_pa": self.c33d,
            "h33_v_per_m": self.h33,
            "eps33s_f_per_m": self.eps33s,
            "area_m2": self.area,
        }
        if self.diameter is not None:
            d["diameter_m"] = self.diameter
        if self.shear_velocity is not None:
            d["shear_velocity_m_s"] = self.shear_velocity
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PiezoPlate":
        return cls(
            thickness=d["thickness_m"],
            density=d["density_kg_m3"],
            c33d=d["stiffness_c33d_pa"],
            h33=d["h33_v_per_m"],
            eps33s=d["eps33s_f_per_m"],
            area=d["area_m2"],
            diameter=d.get("diameter_m"),
            shear_velocity=d.get("shear_velocity_m_s"),
        )


@dataclass(frozen=True)
class PlateConstants:
    """Frequency-dependent derived constants of a plate.

    Attributes
    ----------
    k : float
        Acoustic wavenumber omega/v in rad/m.
    z0 : float
        Acoustic force impedance rho*v*area in N*s/m.
    c0 : float
        Clamped capacitance eps33s*area/thickness in F.
    """

    k: float
    z0: float
    c0: float


def derived_constants(plate: PiezoPlate, omega: float) -> PlateConstants:
    """Wavenumber, acoustic force impedance, and clamped capacitance at omega."""
    if not (omega > 0 and math.isfinite(omega)):
        raise InvalidParameterError(f"omega must be positive and finite, got {omega!r}")
    v = plate.velocity
    return PlateConstants(
        k=omega / v,
        z0=plate.density * v * plate.area,
        c0=plate.eps33s * plate.area / plate.thickness,
    )


@dataclass(frozen=True)
class PassiveLayer:
    """Uniform passive acoustic layer (matching or backing).

    ``thickness`` matters for matching layers, which are modeled as
    transmission lines.  The backing is treated as a semi-infinite absorber,
    so for a backing layer the thickness is informational only.
    """

    thickness: float
    density: float
    velocity: float
    area: float

    def __post_init__(self):
        for name in ("thickness", "density", "velocity", "area"):
            _require_positive(f"layer.{name}", getattr(self, name))

    @property
    def impedance(self) -> float:
        """Force impedance rho*v*area in N*s/m."""
        return self.density * self.velocity * self.area

    def to_dict(self) -> dict:
        return {
            "thickness_m": self.thickness,
            "density_kg_m3": self.density,
            "velocity_m_s": self.velocity,
        }

    @classmethod
    def from_dict(cls, d: dict, area: float) -> "PassiveLayer":
        return cls(
            thickness=d["thickness_m"],
            density=d["density_kg_m3"],
            velocity=d["velocity_m_s"],
            area=area,
        )


@dataclass(frozen=True)
class CableSpec:
    """Coaxial cable described by per-metre lumped constants.

    The shunt conductance of usable coax is negligible at MHz frequencies
    and is not modeled.  Totals scale linearly with ``length``; ``length``
    may be zero (the cable then drops out of the network).
    """

    length: float
    r_per_m: float
    l_per_m: float
    c_per_m: float

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length >= 0):
            raise InvalidParameterError(f"cable.length must be >= 0, got {self.length!r}")
        for name in ("r_per_m", "l_per_m", "c_per_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidParameterError(f"cable.{name} must be >= 0, got {value!r}")

    @property
    def resistance(self) -> float:
        return self.r_per_m * self.length

    @property
    def inductance(self) -> float:
        return self.l_per_m * self.length

    @property
    def capacitance(self) -> float:
        return self.c_per_m * self.length

    def to_dict(self) -> dict:
        return {
            "length_m": self.length,
            "resistance_ohm_per_m": self.r_per_m,
            "inductance_h_per_m": self.l_per_m,
            "capacitance_f_per_m": self.c_per_m,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CableSpec":
        return cls(
            length=d["length_m"],
            r_per_m=d["resistance_ohm_per_m"],
            l_per_m=d["inductance_h_per_m"],
            c_per_m=d["capacitance_f_per_m"],
        )


@dataclass(frozen=True)
class AmpNoise:
    """Input-referred amplifier noise densities: e_n in V/sqrt(Hz), i_n in A/sqrt(Hz)."""

    e_n: float
    i_n: float

    def __post_init__(self):
        for name in ("e_n", "i_n"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidParameterError(f"amp noise {name} must be >= 0, got {value!r}")

    def to_dict(self) -> dict:
        return {"voltage_v_per_rthz": self.e_n, "current_a_per_rthz": self.i_n}

    @classmethod
    def from_dict(cls, d: dict) -> "AmpNoise":
        return cls(e_n=d["voltage_v_per_rthz"], i_n=d["current_a_per_rthz"])


@dataclass(frozen=True)
class ImpedanceTable:
    """Receiver impedance tabulated against frequency.

    Real and imaginary parts are interpolated linearly and held constant
    outside the tabulated range.  A single-point table therefore behaves as
    a constant impedance.
    """

    freqs: tuple[float, ...]
    real: tuple[float, ...]
    imag: tuple[float, ...]

    def __post_init__(self):
        n = len(self.freqs)
        if n == 0 or len(self.real) != n or len(self.imag) != n:
            raise InvalidParameterError("impedance table columns must be equal, non-zero length")
        if any(f2 <= f1 for f1, f2 in zip(self.freqs, self.freqs[1:])):
            raise InvalidParameterError("impedance table frequencies must be strictly increasing")
        if any(r <= 0 for r in self.real):
            raise InvalidParameterError("tabulated receiver impedance must have Re > 0 everywhere")

    def at(self, f_hz: float) -> complex:
        re = float(np.interp(f_hz, self.freqs, self.real))
        im = float(np.interp(f_hz, self.freqs, self.imag))
        return complex(re, im)

    def to_dict(self) -> dict:
        return {
            "freq_hz": list(self.freqs),
            "real_ohm": list(self.real),
            "imag_ohm": list(self.imag),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ImpedanceTable":
        return cls(
            freqs=tuple(d["freq_hz"]),
            real=tuple(d["real_ohm"]),
            imag=tuple(d["imag_ohm"]),
        )


@dataclass(frozen=True)
class ReceiverSpec:
    """Receiving electronics seen by the cable: input impedance plus optional amp noise.

    A plain complex ``impedance`` is treated as constant over the band,
    matching how single-frequency analyzer measurements are normally used.
    """

    impedance: complex | ImpedanceTable
    amp_noise: AmpNoise | None = None

    def __post_init__(self):
        if isinstance(self.impedance, ImpedanceTable):
            return
        z = complex(self.impedance)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise InvalidParameterError(f"receiver impedance must be finite, got {z!r}")
        if z.real <= 0:
            raise InvalidParameterError(f"receiver impedance must have Re > 0, got {z!r}")

    def impedance_at(self, f_hz: float) -> complex:
        if isinstance(self.impedance, ImpedanceTable):
            return self.impedance.at(f_hz)
        return complex(self.impedance)

    def to_dict(self) -> dict:
        if isinstance(self.impedance, ImpedanceTable):
            d: dict = {"impedance_ohm": self.impedance.to_dict()}
        else:
            z = complex(self.impedance)
            d = {"impedance_ohm": [z.real, z.imag]}
        if self.amp_noise is not None:
            d["noise"] = self.amp_noise.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReceiverSpec":
        raw = d["impedance_ohm"]
        impedance: complex | ImpedanceTable
        if isinstance(raw, dict):
            impedance = ImpedanceTable.from_dict(raw)
        else:
            impedance = complex(raw[0], raw[1])
        noise = d.get("noise")
        return cls(
            impedance=impedance,
            amp_noise=AmpNoise.from_dict(noise) if noise is not None else None,
        )


_AREA_TOL = 1e-9


@dataclass(frozen=True)
class ReadoutChain:
    """Complete receive chain: loaded plate, cable, and receiver.

    Attributes
    ----------
    plate : PiezoPlate
    backing : PassiveLayer
        Backing absorber, terminated as semi-infinite.
    medium_impedance : float
        Force impedance of the propagation medium in N*s/m
        (specific impedance in Rayl times the element area).
    cable : CableSpec
    receiver : ReceiverSpec
    matching : PassiveLayer or None
        Optional front matching layer.
    """

    plate: PiezoPlate
    backing: PassiveLayer
    medium_impedance: float
    cable: CableSpec
    receiver: ReceiverSpec
    matching: PassiveLayer | None = None

    def __post_init__(self):
        _require_positive("medium_impedance", self.medium_impedance)
        for name, layer in (("backing", self.backing), ("matching", self.matching)):
            if layer is None:
                continue
            if abs(layer.area - self.plate.area) > _AREA_TOL * self.plate.area:
                raise InvalidParameterError(
                    f"{name} layer area {layer.area!r} differs from plate area "
                    f"{self.plate.area!r}; all stacked components must share one area"
                )

    def with_area(self, area: float) -> "ReadoutChain":
        """Rescale the element area of plate, layers, and medium coherently."""
        _require_positive("area", area)
        scale = area / self.plate.area
        diameter = None
        if self.plate.diameter is not None:
            diameter = self.plate.diameter * math.sqrt(scale)
        plate = replace(self.plate, area=area, diameter=diameter)
        backing = replace(self.backing, area=area)
        matching = replace(self.matching, area=area) if self.matching is not None else None
        return replace(
            self,
            plate=plate,
            backing=backing,
            matching=matching,
            medium_impedance=self.medium_impedance * scale,
        )

    def with_cable_length(self, length: float) -> "ReadoutChain":
        return replace(self, cable=replace(self.cable, length=length))

    def with_receiver(self, impedance: complex) -> "ReadoutChain":
        """Swap the receiver input impedance, keeping the amp noise model."""
        return replace(self, receiver=replace(self.receiver, impedance=complex(impedance)))

    def to_dict(self) -> dict:
        d = {
            "plate": self.plate.to_dict(),
            "backing_layer": self.backing.to_dict(),
            "medium": {"specific_impedance_rayl": self.medium_impedance / self.plate.area},
            "cable": self.cable.to_dict(),
            "receiver": self.receiver.to_dict(),
        }
        if self.matching is not None:
            d["matching_layer"] = self.matching.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReadoutChain":
        plate = PiezoPlate.from_dict(d["plate"])
        matching = d.get("matching_layer")
        return cls(
            plate=plate,
            backing=PassiveLayer.from_dict(d["backing_layer"], area=plate.area),
            medium_impedance=d["medium"]["specific_impedance_rayl"] * plate.area,
            cable=CableSpec.from_dict(d["cable"]),
            receiver=ReceiverSpec.from_dict(d["receiver"]),
            matching=PassiveLayer.from_dict(matching, area=plate.area) if matching else None,
        )


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency grid, f_min..f_max inclusive with n_points samples."""

    f_min: float
    f_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.f_min) and math.isfinite(self.f_max)):
            raise InvalidParameterError("grid limits must be finite")
        if self.f_max <= self.f_min:
            raise InvalidParameterError(
                f"grid needs f_max > f_min, got [{self.f_min}, {self.f_max}]"
            )
        if self.n_points < 2:
            raise InvalidParameterError(f"grid needs at least 2 points, got {self.n_points}")

    @property
    def bin_width(self) -> float:
        return (self.f_max - self.f_min) / (self.n_points - 1)

    def frequencies(self) -> Array:
        return np.linspace(self.f_min, self.f_max, self.n_points)

    def to_dict(self) -> dict:
        return {"f_min_hz": self.f_min, "f_max_hz": self.f_max, "n_points": self.n_points}

    @classmethod
    def from_dict(cls, d: dict) -> "FrequencyGrid":
        return cls(f_min=d["f_min_hz"], f_max=d["f_max_hz"], n_points=d["n_points"])


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided complex spectrum sampled on an increasing positive grid.

    ``unit`` names what the values mean, e.g. ``"V/Pa"``, ``"V/N"``,
    ``"Ohm"``, ``"V^2/Hz"`` or ``"dimensionless"``.
    """

    freqs: Array = field(repr=False)
    values: Array = field(repr=False)
    unit: str = "dimensionless"

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if freqs.ndim != 1 or values.shape != freqs.shape:
            raise InvalidParameterError("spectrum freqs and values must be 1-D and equal length")
        if freqs.size == 0:
            raise InvalidParameterError("spectrum must not be empty")
        if freqs[0] <= 0 or np.any(np.diff(freqs) <= 0):
            raise InvalidParameterError("spectrum frequencies must be positive and increasing")
        if not self.unit:
            raise InvalidParameterError("spectrum unit tag must be non-empty")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "values", values)

    @property
    def magnitude(self) -> Array:
        return np.abs(self.values)

    def restricted(self, f_lo: float, f_hi: float) -> "Spectrum":
        """Sub-spectrum on [f_lo, f_hi]; raises if nothing falls inside."""
        mask = (self.freqs >= f_lo) & (self.freqs <= f_hi)
        if not np.any(mask):
            raise InvalidParameterError(
                f"band [{f_lo}, {f_hi}] Hz does not intersect the spectrum grid"
            )
        return Spectrum(self.freqs[mask], self.values[mask], self.unit)

    def to_dict(self) -> dict:
        return {
            "freq_hz": self.freqs.tolist(),
            "real": self.values.real.tolist(),
            "imag": self.values.imag.tolist(),
            "unit": self.unit,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Spectrum":
        values = np.asarray(d["real"], dtype=float) + 1j * np.asarray(d["imag"], dtype=float)
        return cls(np.asarray(d["freq_hz"], dtype=float), values, d["unit"])
