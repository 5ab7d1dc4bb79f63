"""Chain (ABCD) two-port algebra shared by the acoustic and electrical sides.

A two-port here is the 2x2 matrix M in

    [x_in; y_in] = M [x_out; y_out]

where (x, y) is (F, v) on the acoustic side and (V, I) on the electrical
side.  Each matrix carries a convention tag naming its input and output
variable pairs; cascading checks that adjacent tags line up, which catches
the classic mistake of composing across the transformer in the wrong order.

All elementary factors used here are reciprocal, so det(M) = 1.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidParameterError

ACOUSTIC = ("F,v", "F,v")
ELECTRICAL = ("V,I", "V,I")
ACOUSTIC_TO_ELECTRICAL = ("F,v", "V,I")


@dataclass(frozen=True)
class TwoPort:
    """Chain matrix [[a, b], [c, d]] with an (input, output) convention tag."""

    a: complex
    b: complex
    c: complex
    d: complex
    ports: tuple[str, str] = ELECTRICAL

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls, ports: tuple[str, str] = ELECTRICAL) -> "TwoPort":
        return cls(1.0, 0.0, 0.0, 1.0, ports)

    def apply(self, x_out: complex, y_out: complex) -> tuple[complex, complex]:
        """Map output-side quantities back to the input side."""
        return (self.a * x_out + self.b * y_out, self.c * x_out + self.d * y_out)


def series(z: complex, ports: tuple[str, str] = ELECTRICAL) -> TwoPort:
    """Series impedance z: drops x, passes y through."""
    return TwoPort(1.0, z, 0.0, 1.0, ports)


def shunt(y: complex, ports: tuple[str, str] = ELECTRICAL) -> TwoPort:
    """Shunt admittance y: passes x through, diverts y."""
    return TwoPort(1.0, 0.0, y, 1.0, ports)


def transformer(ratio: complex, ports: tuple[str, str] = ACOUSTIC_TO_ELECTRICAL) -> TwoPort:
    """Ideal transformer with x_in = ratio * x_out and y_in = y_out / ratio."""
    if ratio == 0:
        raise InvalidParameterError("transformer ratio must be non-zero")
    return TwoPort(ratio, 0.0, 0.0, 1.0 / ratio, ports)


def tline(theta: float, z_line: complex, ports: tuple[str, str] = ACOUSTIC) -> TwoPort:
    """Lossless transmission line of electrical length theta (rad) and impedance z_line."""
    if z_line == 0:
        raise InvalidParameterError("transmission line impedance must be non-zero")
    c = cmath.cos(theta)
    s = cmath.sin(theta)
    return TwoPort(c, 1j * z_line * s, 1j * s / z_line, c, ports)


def cascade(parts: Sequence[TwoPort] | Iterable[TwoPort]) -> TwoPort:
    """Ordered product of two-ports, first element nearest the input side."""
    parts = list(parts)
    if not parts:
        raise InvalidParameterError("cascade of zero two-ports is undefined")
    result = parts[0]
    for nxt in parts[1:]:
        if result.ports[1] != nxt.ports[0]:
            raise InvalidParameterError(
                f"cannot cascade: upstream output convention {result.ports[1]!r} "
                f"does not match downstream input convention {nxt.ports[0]!r}"
            )
        result = TwoPort(
            a=result.a * nxt.a + result.b * nxt.c,
            b=result.a * nxt.b + result.b * nxt.d,
            c=result.c * nxt.a + result.d * nxt.c,
            d=result.c * nxt.b + result.d * nxt.d,
            ports=(result.ports[0], nxt.ports[1]),
        )
    return result
