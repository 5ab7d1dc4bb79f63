"""Receive transfer functions of the assembled chain.

Two views of the same network:

* ``h1`` is the single-frequency closed form for the electrical ladder: a
  source behind the piezoelectric series branch, the cable T-network, and
  the receiver.  It is cheap enough to sweep inside optimizers.
* ``h2`` is the full-band transfer from the incident acoustic force at the
  front face to the receiver voltage, evaluated through the cascaded chain
  matrix with the wave boundary conditions at the face
  (F = F_i + F_r, v = (F_i - F_r)/Zc) and V = I Zr at the receiver.

``open_circuit_gain`` is the analytic no-load limit of ``h2`` (zero cable,
|Zr| -> inf).  With the source branch taken as the full Thevenin impedance
seen at the plate terminals, h2 factors exactly as h1 * open_circuit_gain;
with the plain piezoelectric branch Za it is the usual simplified ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError, SingularFrequencyError
from .klm import acoustic_block, chain_matrix, series_impedance
from .twoport import cascade, series
from .types import ReadoutChain

_TINY = 1e-300


@dataclass(frozen=True)
class H1Inputs:
    """Lumped single-frequency ladder parameters.

    Attributes
    ----------
    z_piezo : complex
        Series source-branch impedance in ohms.  Normally the full complex
        piezoelectric branch Za (clamped capacitance plus motional
        reactance); the Thevenin variant adds the acoustic load reflected
        through the transformer.
    r_cable, l_cable, c_cable : float
        Cable totals in ohm, H, F (split as a symmetric T internally).
    z_receiver : complex
        Receiver input impedance, Re > 0.
    """

    z_piezo: complex
    r_cable: float
    l_cable: float
    c_cable: float
    z_receiver: complex

    def __post_init__(self):
        for name in ("r_cable", "l_cable", "c_cable"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidParameterError(f"{name} must be >= 0, got {value!r}")
        if not complex(self.z_receiver).real > 0:
            raise InvalidParameterError(
                f"receiver impedance must have Re > 0, got {self.z_receiver!r}"
            )

    @classmethod
    def from_chain(
        cls, omega: float, chain: ReadoutChain, source: str = "za"
    ) -> "H1Inputs":
        """Build ladder inputs from a chain.

        ``source="za"`` uses the piezoelectric series branch alone (the
        usual simplified model).  ``source="thevenin"`` uses the complete
        source impedance at the plate terminals, which makes
        h1 * open_circuit_gain reproduce h2 exactly.
        """
        if source == "za":
            z_piezo = series_impedance(omega, chain.plate)
        elif source == "thevenin":
            z_piezo = electrical_input_impedance(omega, chain, look_from="piezo_terminals")
        else:
            raise InvalidParameterError(f"unknown source model {source!r}")
        cable = chain.cable
        return cls(
            z_piezo=z_piezo,
            r_cable=cable.resistance,
            l_cable=cable.inductance,
            c_cable=cable.capacitance,
            z_receiver=chain.receiver.impedance_at(omega / (2 * math.pi)),
        )


def h1(omega: float, inputs: H1Inputs) -> complex:
    """Receiver voltage per source volt for the lumped ladder.

    With Z = (Rc + j w Lc)/2 + Zr:

        H1 = Zr / [ (Z - Zr + Z_piezo)(1 + j w Cc Z) + Z ]
    """
    zr = complex(inputs.z_receiver)
    z = (inputs.r_cable + 1j * omega * inputs.l_cable) / 2.0 + zr
    den = (z - zr + inputs.z_piezo) * (1.0 + 1j * omega * inputs.c_cable * z) + z
    if abs(den) < _TINY:
        raise SingularFrequencyError(
            "h1 denominator vanished", frequency_hz=omega / (2 * math.pi), factor="h1"
        )
    return zr / den


def h2(omega: float, chain: ReadoutChain) -> complex:
    """Receiver voltage per newton of incident force at the front face.

    H2 = 2 Zr / (A Zr + B + C Zr Zc + D Zc) with (A, B, C, D) the chain
    matrix and Zc the medium force impedance.
    """
    m = chain_matrix(omega, chain)
    zc = chain.medium_impedance
    zr = chain.receiver.impedance_at(omega / (2 * math.pi))
    den = m.a * zr + m.b + m.c * zr * zc + m.d * zc
    if abs(den) < _TINY:
        raise SingularFrequencyError(
            "h2 denominator vanished", frequency_hz=omega / (2 * math.pi), factor="h2"
        )
    return 2.0 * zr / den


def open_circuit_gain(omega: float, chain: ReadoutChain) -> complex:
    """No-load voltage at the plate terminals per newton of incident force.

    Analytic |Zr| -> inf limit of h2 with a zero-length cable: only the
    first column of the acoustic cascade survives, so the cable drops out
    exactly.  Returns 2 / (A + C Zc) for that reduced cascade.
    """
    p = acoustic_block(omega, chain)
    zc = chain.medium_impedance
    den = p.a + p.c * zc
    if abs(den) < _TINY:
        raise SingularFrequencyError(
            "open-circuit gain denominator vanished",
            frequency_hz=omega / (2 * math.pi),
            factor="open_circuit_gain",
        )
    return 2.0 / den


def electrical_input_impedance(
    omega: float, chain: ReadoutChain, look_from: str = "receiver"
) -> complex:
    """Impedance seen into the chain with the acoustic faces terminated.

    The front face is loaded by the medium, the back face by the backing
    absorbed in the chain matrix.  ``look_from="receiver"`` gives the source
    impedance that drives the receiver node (the noise calculation needs
    it); ``look_from="piezo_terminals"`` stops before the cable and is the
    Thevenin impedance at the plate terminals.  With both faces open instead
    of terminated the latter collapses to the clamped capacitance alone.
    """
    if look_from == "receiver":
        m = chain_matrix(omega, chain)
    elif look_from == "piezo_terminals":
        p = acoustic_block(omega, chain)
        za = series_impedance(omega, chain.plate)
        m = cascade([p, series(za)])
    else:
        raise InvalidParameterError(f"unknown look_from {look_from!r}")
    zc = chain.medium_impedance
    den = m.a + m.c * zc
    if abs(den) < _TINY:
        raise SingularFrequencyError(
            "input impedance denominator vanished",
            frequency_hz=omega / (2 * math.pi),
            factor="input_impedance",
        )
    return (m.b + m.d * zc) / den
