"""Transfer functions: ladder gain, full-band gain, and their factorization."""

import math

import numpy as np
import pytest

from paik import InvalidParameterError, reference
from paik.klm import guard_grid, series_impedance
from paik.transfer import H1Inputs, electrical_input_impedance, h1, h2, open_circuit_gain

from oracles import h2_distributed_cable, nodal_h1

W5 = 2.0 * math.pi * 5.0e6


def rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


class TestH1AgainstNodalAnalysis:
    def test_random_ladders_match_the_nodal_oracle(self):
        """200 random ladders against an independent two-node solution."""
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(200):
            omega = 2.0 * math.pi * rng.uniform(1e5, 2e7)
            inputs = H1Inputs(
                z_piezo=complex(rng.uniform(0.1, 1e3), rng.uniform(-1e3, 1e3)),
                r_cable=rng.uniform(0.0, 5.0),
                l_cable=rng.uniform(0.0, 2e-6),
                c_cable=rng.uniform(0.0, 1e-9),
                z_receiver=complex(rng.uniform(1.0, 1e3), rng.uniform(-500.0, 500.0)),
            )
            want = nodal_h1(
                omega,
                inputs.z_piezo,
                inputs.r_cable,
                inputs.l_cable,
                inputs.c_cable,
                inputs.z_receiver,
            )
            worst = max(worst, rel(h1(omega, inputs), want))
        assert worst < 1e-12

    def test_zero_cable_reduces_to_voltage_divider(self):
        inputs = H1Inputs(
            z_piezo=10.0 - 200.0j, r_cable=0.0, l_cable=0.0, c_cable=0.0, z_receiver=51.0 - 0.07j
        )
        want = inputs.z_receiver / (inputs.z_receiver + inputs.z_piezo)
        assert rel(h1(W5, inputs), want) < 1e-15

    def test_inputs_reject_non_passive_receiver(self):
        with pytest.raises(InvalidParameterError):
            H1Inputs(z_piezo=1j, r_cable=0.0, l_cable=0.0, c_cable=0.0, z_receiver=-50.0)

    def test_inputs_reject_negative_cable_totals(self):
        with pytest.raises(InvalidParameterError):
            H1Inputs(z_piezo=1j, r_cable=-0.1, l_cable=0.0, c_cable=0.0, z_receiver=50.0)


class TestFromChain:
    def test_default_source_is_the_piezo_series_branch(self, ref_chain):
        inputs = H1Inputs.from_chain(W5, ref_chain)
        assert inputs.z_piezo == series_impedance(W5, ref_chain.plate)
        assert inputs.r_cable == ref_chain.cable.resistance
        assert inputs.z_receiver == reference.CHANNEL_IMPEDANCES[4]

    def test_thevenin_source_includes_the_acoustic_load(self, ref_chain):
        thevenin = H1Inputs.from_chain(W5, ref_chain, source="thevenin")
        want = electrical_input_impedance(W5, ref_chain, look_from="piezo_terminals")
        assert thevenin.z_piezo == want
        # unlike the bare branch, the Thevenin source is lossy
        assert thevenin.z_piezo.real > 1.0
        assert abs(H1Inputs.from_chain(W5, ref_chain).z_piezo.real) < 1e-12

    def test_unknown_source_model_rejected(self, ref_chain):
        with pytest.raises(InvalidParameterError):
            H1Inputs.from_chain(W5, ref_chain, source="norton")


class TestH2:
    def test_matches_variant_with_distributed_cable_for_short_runs(self, ref_chain):
        """The lumped T tracks the exact RLGC line while the cable is short.

        1.5 m is about 0.15 wavelengths at 9 MHz; the model error grows
        roughly with the square of electrical length.
        """
        for f, tol in ((1e6, 1e-4), (5e6, 3e-3), (9e6, 2e-2)):
            w = 2.0 * math.pi * f
            assert rel(h2(w, ref_chain), h2_distributed_cable(w, ref_chain)) < tol

    def test_factorization_with_thevenin_source(self, ref_chain, band_grid):
        """h2 = h1(thevenin) * open-circuit gain, bin by bin."""
        freqs = guard_grid(band_grid.frequencies(), ref_chain.plate)
        worst = 0.0
        for f in freqs[::7]:
            w = 2.0 * math.pi * float(f)
            lhs = h2(w, ref_chain)
            rhs = h1(w, H1Inputs.from_chain(w, ref_chain, source="thevenin")) * open_circuit_gain(
                w, ref_chain
            )
            worst = max(worst, rel(lhs, rhs))
        assert worst < 1e-12

    def test_channel_ordering_at_5mhz(self, channel_chains):
        """Higher-impedance channels load the plate less and keep more signal."""
        mags = {ch: abs(h2(W5, chain)) for ch, chain in channel_chains.items()}
        assert mags[4] < mags[3] < mags[2] < mags[1]


class TestOpenCircuitGain:
    def test_is_the_no_load_limit_of_h2(self, ref_chain):
        unloaded = ref_chain.with_cable_length(0.0).with_receiver(1e9 + 0.0j)
        for f in (2e6, 5e6, 11e6):
            w = 2.0 * math.pi * f
            assert rel(h2(w, unloaded), open_circuit_gain(w, ref_chain)) < 1e-6

    def test_does_not_depend_on_the_cable(self, ref_chain):
        short = ref_chain.with_cable_length(0.0)
        long = ref_chain.with_cable_length(7.0)
        for f in (1e6, 5e6, 15e6):
            w = 2.0 * math.pi * f
            assert open_circuit_gain(w, short) == open_circuit_gain(w, long)

    def test_pressure_referred_gain_is_area_invariant(self, ref_chain):
        base = open_circuit_gain(W5, ref_chain) * ref_chain.plate.area
        for scale in (0.25, 4.0):
            variant = ref_chain.with_area(scale * ref_chain.plate.area)
            gain = open_circuit_gain(W5, variant) * variant.plate.area
            assert rel(gain, base) < 1e-13


class TestInputImpedance:
    def test_receiver_view_differs_from_piezo_terminal_view(self, ref_chain):
        z_rec = electrical_input_impedance(W5, ref_chain, look_from="receiver")
        z_pzt = electrical_input_impedance(W5, ref_chain, look_from="piezo_terminals")
        assert abs(z_rec - z_pzt) > 1.0

    def test_views_coincide_with_zero_cable(self, ref_chain):
        bare = ref_chain.with_cable_length(0.0)
        z_rec = electrical_input_impedance(W5, bare, look_from="receiver")
        z_pzt = electrical_input_impedance(W5, bare, look_from="piezo_terminals")
        assert rel(z_rec, z_pzt) < 1e-14

    def test_source_impedance_is_dissipative_across_band(self, ref_chain, band_grid):
        """Terminated acoustic faces radiate, so Re(Z_src) > 0 everywhere."""
        freqs = guard_grid(band_grid.frequencies(), ref_chain.plate)
        for f in freqs[::19]:
            z = electrical_input_impedance(2.0 * math.pi * float(f), ref_chain)
            assert z.real > 0.0

    def test_unknown_view_rejected(self, ref_chain):
        with pytest.raises(InvalidParameterError):
            electrical_input_impedance(W5, ref_chain, look_from="antenna")
