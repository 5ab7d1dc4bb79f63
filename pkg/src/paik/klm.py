"""Equivalent-circuit decomposition of a thickness-mode piezoelectric plate.

The plate is a three-port: two acoustic faces (force F, velocity v) and one
electrical port (V, I).  Its impedance form is

    F_B = Z0/(j tan kL) v_B + Z0/(j sin kL) v_F + h33/(j w) I
    F_F = Z0/(j sin kL) v_B + Z0/(j tan kL) v_F + h33/(j w) I
    V   = h33/(j w) (v_B + v_F)               + 1/(j w C0) I

The same physics folds into a circuit: an acoustic line of length L tapped
at its midpoint by an ideal transformer

    phi = w Z0 / (2 h33 sin(kL/2))

whose electrical side carries the series reactance

    Za = 1/(j w C0) + j h33^2 sin(kL) / (w^2 Z0).

Both forms are implemented here and checked against each other by the
identity suite; the circuit form is what the full receive chain cascades.

Singular frequencies (kL a multiple of pi) are guarded: grid helpers nudge
points off the poles, single-point evaluation raises
:class:`~paik.errors.SingularFrequencyError`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, SingularFrequencyError
from .twoport import ACOUSTIC, ELECTRICAL, TwoPort, cascade, series, shunt, tline, transformer
from .types import CableSpec, PiezoPlate, ReadoutChain, derived_constants

# sin/tan arguments closer to a pole than this are treated as singular
_SING_TOL = 1e-12


def _plate_trig(plate: PiezoPlate, omega: float):
    con = derived_constants(plate, omega)
    kl = con.k * plate.thickness
    return con, kl


def turns_ratio(omega: float, plate: PiezoPlate) -> float:
    """Transformer ratio phi = w Z0 / (2 h33 sin(kL/2)); real, sign follows sin."""
    con, kl = _plate_trig(plate, omega)
    s = math.sin(kl / 2.0)
    if abs(s) < _SING_TOL:
        raise SingularFrequencyError(
            f"turns ratio is singular where kL is a multiple of 2*pi "
            f"(f = {omega / (2 * math.pi):.6g} Hz)",
            frequency_hz=omega / (2 * math.pi),
            factor="transformer",
        )
    return omega * con.z0 / (2.0 * plate.h33 * s)


def dynamic_reactance(omega: float, plate: PiezoPlate) -> complex:
    """Motional reactance j X1 = j h33^2 sin(kL) / (w^2 Z0); zero where sin(kL) = 0."""
    con, kl = _plate_trig(plate, omega)
    return 1j * plate.h33**2 * math.sin(kl) / (omega**2 * con.z0)


def series_impedance(omega: float, plate: PiezoPlate) -> complex:
    """Electrical series branch Za = 1/(j w C0) + j X1."""
    con, _ = _plate_trig(plate, omega)
    return 1.0 / (1j * omega * con.c0) + dynamic_reactance(omega, plate)


@dataclass(frozen=True)
class KlmParams:
    """Circuit constants of the plate at one frequency."""

    phi: float
    za: complex
    c0: float
    x1: complex

    @classmethod
    def for_plate(cls, omega: float, plate: PiezoPlate) -> "KlmParams":
        con, _ = _plate_trig(plate, omega)
        x1 = dynamic_reactance(omega, plate)
        za = 1.0 / (1j * omega * con.c0) + x1
        return cls(phi=turns_ratio(omega, plate), za=za, c0=con.c0, x1=x1)


def three_port_impedance(omega: float, plate: PiezoPlate) -> np.ndarray:
    """Symmetric 3x3 impedance matrix mapping (v_B, v_F, I) to (F_B, F_F, V)."""
    con, kl = _plate_trig(plate, omega)
    if abs(math.sin(kl)) < _SING_TOL:
        raise SingularFrequencyError(
            f"three-port impedance is singular where kL is a multiple of pi "
            f"(f = {omega / (2 * math.pi):.6g} Hz)",
            frequency_hz=omega / (2 * math.pi),
            factor="three_port",
        )
    z_tan = con.z0 / (1j * math.tan(kl))
    z_sin = con.z0 / (1j * math.sin(kl))
    z_h = plate.h33 / (1j * omega)
    z_el = 1.0 / (1j * omega * con.c0)
    return np.array(
        [
            [z_tan, z_sin, z_h],
            [z_sin, z_tan, z_h],
            [z_h, z_h, z_el],
        ],
        dtype=complex,
    )


def circuit_three_port_response(
    omega: float, plate: PiezoPlate, v_back: complex, v_front: complex, current: complex
) -> tuple[complex, complex, complex]:
    """(F_B, F_F, V) from the assembled midpoint-tapped circuit.

    Solves the network equations directly: two half-length line segments
    meeting at the centre node, the transformer secondary feeding that node,
    and Za in series with the electrical port.  This is the independent
    route against which the impedance-matrix form is validated.
    """
    con, kl = _plate_trig(plate, omega)
    params = KlmParams.for_plate(omega, plate)
    c = math.cos(kl / 2.0)
    s = math.sin(kl / 2.0)
    z0 = con.z0

    # Unknowns: F_B, F_F, V, F_node, v_node_back, v_node_front.
    # Rows: half-line relations on each face, velocity balance at the node,
    # and the electrical port equation.
    a = np.array(
        [
            [1, 0, 0, -c, -1j * z0 * s, 0],
            [0, 0, 0, 1j * s / z0, c, 0],
            [0, 1, 0, -c, 0, -1j * z0 * s],
            [0, 0, 0, 1j * s / z0, 0, c],
            [0, 0, 0, 0, 1, 1],
            [0, 0, 1, -1.0 / params.phi, 0, 0],
        ],
        dtype=complex,
    )
    b = np.array(
        [0, v_back, 0, v_front, -current / params.phi, params.za * current],
        dtype=complex,
    )
    f_b, f_f, v_el, _, _, _ = np.linalg.solve(a, b)
    return f_b, f_f, v_el


def open_circuit_input_impedance(omega: float, plate: PiezoPlate) -> complex:
    """Electrical input impedance of the circuit with both faces velocity-free.

    Each open half-length stub presents Z0/(j tan(kL/2)) at the node; the
    pair in parallel reflects through the transformer onto Za.  Collapses
    analytically to 1/(j w C0), which is what the identity suite checks.
    """
    con, kl = _plate_trig(plate, omega)
    params = KlmParams.for_plate(omega, plate)
    t = math.tan(kl / 2.0)
    if abs(t) < _SING_TOL:
        raise SingularFrequencyError(
            "open-face stub is singular where kL is a multiple of 2*pi",
            frequency_hz=omega / (2 * math.pi),
            factor="open_stub",
        )
    stub_parallel = con.z0 / (2j * t)
    return params.za + stub_parallel / params.phi**2


def short_circuit_input_impedance(omega: float, plate: PiezoPlate) -> complex:
    """Electrical input impedance of the circuit with both faces clamped (F = 0)."""
    con, kl = _plate_trig(plate, omega)
    params = KlmParams.for_plate(omega, plate)
    stub_parallel = 1j * con.z0 * math.tan(kl / 2.0) / 2.0
    return params.za + stub_parallel / params.phi**2


def short_circuit_reference(omega: float, plate: PiezoPlate) -> complex:
    """Closed form for the clamped-face input impedance, derived independently:

        V/I = 2 j h33^2 tan(kL/2) / (w^2 Z0) + 1/(j w C0)
    """
    con, kl = _plate_trig(plate, omega)
    return (
        2j * plate.h33**2 * math.tan(kl / 2.0) / (omega**2 * con.z0)
        + 1.0 / (1j * omega * con.c0)
    )


def back_branch_impedance(omega: float, plate: PiezoPlate, z_backing: float) -> complex:
    """Input impedance of the rear half of the plate terminated by the backing.

    Half-length line of impedance Z0 loaded by the backing force impedance:

        Z = Z0 (ZB + j Z0 tan(kL/2)) / (Z0 + j ZB tan(kL/2))

    ZB = Z0 returns Z0 (matched), ZB = 0 returns the shorted stub
    j Z0 tan(kL/2), ZB -> inf approaches the open stub Z0/(j tan(kL/2)).
    """
    if not (z_backing >= 0):
        raise InvalidParameterError(f"backing impedance must be >= 0, got {z_backing!r}")
    con, kl = _plate_trig(plate, omega)
    t = math.tan(kl / 2.0)
    if math.isinf(z_backing):
        if abs(t) < _SING_TOL:
            raise SingularFrequencyError(
                "open back face is singular where kL is a multiple of 2*pi",
                frequency_hz=omega / (2 * math.pi),
                factor="back_branch",
            )
        return con.z0 / (1j * t)
    num = con.z0 * (z_backing + 1j * con.z0 * t)
    den = con.z0 + 1j * z_backing * t
    if abs(den) == 0.0:
        raise SingularFrequencyError(
            "back branch denominator vanished",
            frequency_hz=omega / (2 * math.pi),
            factor="back_branch",
        )
    return num / den


def cable_network(omega: float, cable: CableSpec) -> TwoPort:
    """Symmetric lumped T equivalent of the cable: half the series R + jwL on
    each arm, the full shunt C in the middle.  Zero length gives the identity."""
    if cable.length == 0:
        return TwoPort.identity(ELECTRICAL)
    arm = series((cable.resistance + 1j * omega * cable.inductance) / 2.0)
    return cascade([arm, shunt(1j * omega * cable.capacitance), arm])


def chain_factors(omega: float, chain: ReadoutChain) -> list[tuple[str, TwoPort]]:
    """Ordered named factors of the receive chain, front face to receiver.

    matching layer line -> front half-plate line -> backing branch shunted at
    the midpoint -> transformer -> series Za -> cable T-network.
    """
    plate = chain.plate
    con, kl = _plate_trig(plate, omega)
    factors: list[tuple[str, TwoPort]] = []
    if chain.matching is not None:
        m = chain.matching
        theta = omega * m.thickness / m.velocity
        factors.append(("matching", tline(theta, m.impedance)))
    factors.append(("front_plate", tline(kl / 2.0, con.z0)))
    z_back = back_branch_impedance(omega, plate, chain.backing.impedance)
    factors.append(("back_branch", shunt(1.0 / z_back, ACOUSTIC)))
    params = KlmParams.for_plate(omega, plate)
    factors.append(("transformer", transformer(params.phi)))
    factors.append(("piezo_capacitance", series(params.za)))
    factors.append(("cable", cable_network(omega, chain.cable)))
    return factors


def chain_matrix(omega: float, chain: ReadoutChain) -> TwoPort:
    """Full chain matrix M with (F, v) at the front face = M (V, I) at the receiver."""
    return cascade([m for _, m in chain_factors(omega, chain)])


def acoustic_block(omega: float, chain: ReadoutChain) -> TwoPort:
    """Cascade up to and including the transformer: (F, v) = P (V', I') at
    the transformer primary, before the series Za."""
    factors = chain_factors(omega, chain)
    return cascade([m for name, m in factors if name not in ("piezo_capacitance", "cable")])


def singular_frequencies(plate: PiezoPlate, f_max: float) -> np.ndarray:
    """Frequencies up to f_max where kL hits a multiple of pi."""
    step = plate.half_wave_frequency
    n = int(f_max / step)
    return step * np.arange(1, n + 1)


def guard_grid(freqs: np.ndarray, plate: PiezoPlate, rel: float = 1e-6) -> np.ndarray:
    """Nudge grid points sitting on plate singularities.

    Any frequency within ``rel`` bin widths of a multiple of the half-wave
    frequency is shifted away by exactly ``rel`` bin widths, with a warning.
    The nudge is tiny on purpose: it removes the division blow-up while
    leaving every regular point untouched.
    """
    freqs = np.asarray(freqs, dtype=float).copy()
    if freqs.size < 2:
        return freqs
    bin_width = float(np.median(np.diff(freqs)))
    step = plate.half_wave_frequency
    eps = rel * bin_width
    for i, f in enumerate(freqs):
        m = round(f / step)
        if m < 1:
            continue
        f_sing = m * step
        if abs(f - f_sing) < eps:
            direction = 1.0 if f >= f_sing else -1.0
            freqs[i] = f_sing + direction * eps
            warnings.warn(
                f"grid point {f:.6g} Hz sits on a plate resonance pole; "
                f"nudged to {freqs[i]:.6g} Hz",
                stacklevel=2,
            )
    return freqs
