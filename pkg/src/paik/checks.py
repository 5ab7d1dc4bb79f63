"""Analytic identity suite for a configured chain.

Each check compares two independent routes to the same quantity and
reports the worst relative error over its sample set.  The suite backs
the `validate` subcommand and doubles as a quick numerical health check
after editing chain parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .klm import (
    chain_matrix,
    circuit_three_port_response,
    guard_grid,
    open_circuit_input_impedance,
    short_circuit_input_impedance,
    short_circuit_reference,
    three_port_impedance,
)
from .noise import BOLTZMANN, DEFAULT_TEMPERATURE, node_noise_terms
from .transfer import (
    H1Inputs,
    electrical_input_impedance,
    h1,
    h2,
    open_circuit_gain,
)
from .types import FrequencyGrid, ReadoutChain, derived_constants


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one identity: worst relative error against its tolerance."""

    name: str
    description: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


def run_identity_checks(
    chain: ReadoutChain,
    f_min: float = 0.1e6,
    f_max: float = 20e6,
    n_points: int = 50,
    seed: int = 0,
) -> list[IdentityCheck]:
    """Run every identity on the given chain; deterministic for a seed."""
    plate = chain.plate
    freqs = guard_grid(np.linspace(f_min, f_max, n_points), plate)
    omegas = 2.0 * math.pi * freqs
    rng = np.random.default_rng(seed)
    checks: list[IdentityCheck] = []

    err = max(
        _rel(
            open_circuit_input_impedance(w, plate),
            1.0 / (1j * w * derived_constants(plate, w).c0),
        )
        for w in omegas
    )
    checks.append(
        IdentityCheck(
            "open_circuit_capacitance",
            "open-face input impedance collapses to the clamped capacitance",
            err,
            1e-9,
        )
    )

    err = max(
        _rel(short_circuit_input_impedance(w, plate), short_circuit_reference(w, plate))
        for w in omegas
    )
    checks.append(
        IdentityCheck(
            "short_circuit_branch",
            "clamped-face input impedance matches its closed form",
            err,
            1e-9,
        )
    )

    err_sym = 0.0
    err_match = 0.0
    for w in omegas[:: max(1, n_points // 10)]:
        z = three_port_impedance(w, plate)
        err_sym = max(err_sym, float(np.max(np.abs(z - z.T))) / float(np.max(np.abs(z))))
        for _ in range(5):
            drive = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            expected = z @ drive
            got = circuit_three_port_response(w, plate, *drive)
            err_match = max(err_match, max(_rel(g, e) for g, e in zip(got, expected)))
    checks.append(
        IdentityCheck(
            "three_port_symmetry",
            "impedance matrix of the plate three-port is symmetric",
            err_sym,
            1e-12,
        )
    )
    checks.append(
        IdentityCheck(
            "three_port_match",
            "assembled circuit reproduces the impedance-matrix response",
            err_match,
            1e-9,
        )
    )

    err = 0.0
    for w in omegas:
        lhs = h2(w, chain)
        inputs = H1Inputs.from_chain(w, chain, source="thevenin")
        rhs = h1(w, inputs) * open_circuit_gain(w, chain)
        err = max(err, _rel(lhs, rhs))
    checks.append(
        IdentityCheck(
            "ladder_factorization",
            "full-band response factors into ladder gain times no-load gain",
            err,
            1e-9,
        )
    )

    err = 0.0
    w_mid = omegas[len(omegas) // 2]
    base = open_circuit_gain(w_mid, chain) * chain.plate.area
    for scale in (0.25, 4.0):
        variant = chain.with_area(chain.plate.area * scale)
        gain = open_circuit_gain(w_mid, variant) * variant.plate.area
        err = max(err, _rel(gain, base))
    checks.append(
        IdentityCheck(
            "area_invariance",
            "pressure-referred no-load sensitivity is independent of element area",
            err,
            1e-12,
        )
    )

    err = max(abs(chain_matrix(w, chain).det - 1.0) for w in omegas)
    checks.append(
        IdentityCheck(
            "chain_reciprocity",
            "chain matrix determinant stays at unity",
            err,
            1e-9,
        )
    )

    err = 0.0
    four_kt = 4.0 * BOLTZMANN * DEFAULT_TEMPERATURE
    for w in omegas[:: max(1, n_points // 10)]:
        z_src = electrical_input_impedance(w, chain, look_from="receiver")
        z_r = chain.receiver.impedance_at(w / (2 * math.pi))
        src, rec, _, _ = node_noise_terms(z_src, z_r)
        z_eq = z_src * z_r / (z_src + z_r)
        expected = four_kt * z_eq.real
        err = max(err, _rel(src + rec, expected))
    checks.append(
        IdentityCheck(
            "thermal_divider_sum",
            "shaped thermal terms sum to the equivalent-impedance Johnson floor",
            err,
            1e-9,
        )
    )

    return checks


def default_check_grid() -> FrequencyGrid:
    return FrequencyGrid(0.1e6, 20e6, 50)
