"""Reference chain fixture: a plausible 5 MHz, 3 mm piezocomposite probe.

These values describe a representative single-element 1-3 composite disc
on a light absorptive backing with a quarter-wave front matching layer,
driven into water, read out over a short run of RG-174-class coax.  They
are chosen to be physically sensible and well conditioned; they are a test
fixture and a documentation example, not a calibration of any particular
hardware.

The four receiver impedances bundled here are analyzer-measured input
impedances of four commercial ultrasound receive channels at 5 MHz,
ordered channel 1..4 from highest to lowest magnitude.
"""

from __future__ import annotations

import math

from .types import AmpNoise, CableSpec, PassiveLayer, PiezoPlate, ReadoutChain, ReceiverSpec

#: Measured receive-channel input impedances at 5 MHz, ohms.
CHANNEL_IMPEDANCES: dict[int, complex] = {
    1: 404.0 - 324.0j,
    2: 145.0 - 24.0j,
    3: 128.0 - 17.0j,
    4: 51.0 - 0.07j,
}

#: A deliberately low, purely resistive receiver used to exercise the
#: low-impedance corner of the design space (interior cable-length optimum).
LOW_IMPEDANCE_RECEIVER: complex = 30.0 + 0.0j

#: Generic low-noise bipolar amplifier input noise densities
#: (V/sqrt(Hz), A/sqrt(Hz)).
AMP_NOISE = AmpNoise(e_n=0.69e-9, i_n=8.0e-12)

_DIAMETER = 3.0e-3
_AREA = math.pi * (_DIAMETER / 2.0) ** 2


def reference_plate(diameter: float = _DIAMETER) -> PiezoPlate:
    """5 MHz thickness-resonant 1-3 composite disc of the given diameter."""
    area = math.pi * (diameter / 2.0) ** 2
    return PiezoPlate(
        thickness=3.8e-4,          # half wavelength at ~5.0 MHz
        density=4700.0,
        c33d=6.8e10,               # v = sqrt(c33d/rho) ~ 3804 m/s
        h33=2.0e9,
        eps33s=6.198e-9,           # ~700 eps_0
        area=area,
        diameter=diameter,
        shear_velocity=1568.0,
    )


def reference_chain(channel: int = 4, diameter: float = _DIAMETER) -> ReadoutChain:
    """Full reference chain terminated by one of the measured channels."""
    plate = reference_plate(diameter)
    area = plate.area
    matching = PassiveLayer(
        thickness=1.27e-4,         # quarter wave at 5 MHz for v = 2540 m/s
        density=2050.0,
        velocity=2540.0,
        area=area,
    )
    backing = PassiveLayer(
        thickness=5.0e-3,
        density=6000.0,
        velocity=2000.0,           # 12.0 MRayl tungsten-loaded absorber
        area=area,
    )
    return ReadoutChain(
        plate=plate,
        backing=backing,
        medium_impedance=1.48e6 * area,   # water
        cable=CableSpec(length=1.5, r_per_m=0.35, l_per_m=252e-9, c_per_m=101e-12),
        receiver=ReceiverSpec(impedance=CHANNEL_IMPEDANCES[channel], amp_noise=AMP_NOISE),
        matching=matching,
    )
