"""Noise budget terms, their closed-form checks, and SNR behavior."""

import math

import numpy as np
import pytest

from paik import (
    BOLTZMANN,
    DEFAULT_TEMPERATURE,
    Excitation,
    FrequencyGrid,
    InfiniteSnrError,
    InvalidParameterError,
    node_noise_terms,
    noise_psd,
    reference,
    snr,
)
from paik.transfer import electrical_input_impedance

from oracles import johnson_parallel_psd

GRID = FrequencyGrid(0.05e6, 20e6, 200)


def strip_amp_noise(chain):
    from dataclasses import replace

    return replace(chain, receiver=replace(chain.receiver, amp_noise=None))


class TestNodeNoiseTerms:
    def test_two_resistors_give_the_parallel_johnson_psd(self):
        """Shaped thermal pair against the textbook 4kT(R1 || R2)."""
        for r1, r2 in ((50.0, 50.0), (404.0, 51.0), (1e3, 7.5), (0.1, 1e6)):
            src, rec, e, i = node_noise_terms(complex(r1), complex(r2))
            assert e == 0.0 and i == 0.0
            want = johnson_parallel_psd(r1, r2, DEFAULT_TEMPERATURE)
            assert (src + rec) == pytest.approx(want, rel=1e-12)

    def test_reactive_parts_shape_but_do_not_generate(self):
        """A lossless reactance adds no thermal noise of its own."""
        src, rec, _, _ = node_noise_terms(0.0 + 100.0j, 50.0 + 0.0j)
        assert src == 0.0
        assert rec > 0.0

    def test_thermal_sum_equals_equivalent_impedance_form_for_complex_z(self):
        z_src = 120.0 - 80.0j
        z_r = 404.0 - 324.0j
        src, rec, _, _ = node_noise_terms(z_src, z_r)
        z_eq = z_src * z_r / (z_src + z_r)
        want = 4.0 * BOLTZMANN * DEFAULT_TEMPERATURE * z_eq.real
        assert (src + rec) == pytest.approx(want, rel=1e-12)

    def test_amp_terms(self):
        e_n, i_n = 0.69e-9, 8.0e-12
        z_src, z_r = 100.0 + 0.0j, 51.0 - 0.07j
        _, _, e_term, i_term = node_noise_terms(z_src, z_r, e_n, i_n)
        z_eq = z_src * z_r / (z_src + z_r)
        assert e_term == pytest.approx(e_n**2, rel=1e-15)
        assert i_term == pytest.approx(i_n**2 * abs(z_eq) ** 2, rel=1e-15)

    def test_temperature_scales_thermal_terms_linearly(self):
        src290, rec290, _, _ = node_noise_terms(100.0 + 0j, 50.0 + 0j, temperature_k=290.0)
        src580, rec580, _, _ = node_noise_terms(100.0 + 0j, 50.0 + 0j, temperature_k=580.0)
        assert src580 == pytest.approx(2.0 * src290, rel=1e-15)
        assert rec580 == pytest.approx(2.0 * rec290, rel=1e-15)

    def test_cancelling_impedances_rejected(self):
        with pytest.raises(InvalidParameterError):
            node_noise_terms(50.0 + 10.0j, -50.0 - 10.0j)


class TestNoisePsd:
    def test_components_sum_to_the_total(self, ref_chain):
        budget = noise_psd(ref_chain, GRID)
        total = sum(budget.components[n].values.real for n in budget.components)
        np.testing.assert_allclose(total, budget.psd.values.real, rtol=1e-12)

    def test_total_never_falls_below_the_thermal_floor(self, ref_chain):
        """With amp noise present, the PSD sits on or above 4kT Re(Zeq)."""
        budget = noise_psd(ref_chain, GRID)
        for i, f in enumerate(budget.psd.freqs[::13]):
            w = 2.0 * math.pi * float(f)
            z_src = electrical_input_impedance(w, ref_chain)
            z_r = ref_chain.receiver.impedance_at(float(f))
            z_eq = z_src * z_r / (z_src + z_r)
            floor = 4.0 * BOLTZMANN * DEFAULT_TEMPERATURE * z_eq.real
            assert budget.psd.values.real[13 * i] >= floor * (1.0 - 1e-12)

    def test_missing_amp_noise_warns_and_zeroes_those_rows(self, ref_chain):
        bare = strip_amp_noise(ref_chain)
        with pytest.warns(UserWarning, match="amplifier noise"):
            budget = noise_psd(bare, GRID)
        assert np.all(budget.components["amp_voltage"].values.real == 0.0)
        assert np.all(budget.components["amp_current"].values.real == 0.0)
        assert np.all(budget.components["receiver_thermal"].values.real > 0.0)

    def test_zero_temperature_without_amp_noise_is_silent(self, ref_chain):
        bare = strip_amp_noise(ref_chain)
        with pytest.warns(UserWarning):
            budget = noise_psd(bare, GRID, temperature_k=0.0)
        assert np.all(budget.psd.values.real == 0.0)

    def test_negative_temperature_rejected(self, ref_chain):
        with pytest.raises(InvalidParameterError):
            noise_psd(ref_chain, GRID, temperature_k=-1.0)

    def test_band_avg_restricts_the_window(self, ref_chain):
        budget = noise_psd(ref_chain, GRID)
        full = budget.band_avg()
        narrow = budget.band_avg(4e6, 6e6)
        part = budget.psd.restricted(4e6, 6e6)
        assert narrow == pytest.approx(float(np.mean(part.values.real)), rel=1e-15)
        assert narrow != full

    def test_channel_one_carries_the_highest_noise_density(self, channel_chains):
        """Band-average PSD falls monotonically with channel number."""
        avgs = {
            ch: noise_psd(chain, GRID).band_avg() for ch, chain in channel_chains.items()
        }
        assert avgs[1] > avgs[2] > avgs[3] > avgs[4]

    def test_psd_falls_as_the_element_grows(self, ref_chain):
        """A larger element lowers its source impedance and with it the
        thermal density at the node."""
        small = noise_psd(ref_chain.with_area(0.25 * ref_chain.plate.area), GRID).band_avg()
        base = noise_psd(ref_chain, GRID).band_avg()
        large = noise_psd(ref_chain.with_area(4.0 * ref_chain.plate.area), GRID).band_avg()
        assert small > base > large


class TestSnr:
    def test_scales_linearly_with_pressure(self, ref_chain):
        lo = snr(ref_chain, Excitation(pressure_pa=1.0), GRID)
        hi = snr(ref_chain, Excitation(pressure_pa=2.0), GRID)
        assert hi == pytest.approx(2.0 * lo, rel=1e-12)

    def test_spectral_shape_reweights_the_peak(self, ref_chain):
        """Suppressing everything above 2 MHz forces the peak out of the
        thickness resonance and lowers the SNR."""
        flat = snr(ref_chain, Excitation(pressure_pa=1.0), GRID)
        lowpass = Excitation(pressure_pa=1.0, shape=lambda f: 1.0 if f < 2e6 else 1e-3)
        shaped = snr(ref_chain, lowpass, GRID)
        assert shaped < flat

    def test_band_must_sit_inside_the_grid(self, ref_chain):
        with pytest.raises(InvalidParameterError, match="band"):
            snr(ref_chain, Excitation(pressure_pa=1.0), GRID, band=(1e6, 30e6))

    def test_zero_noise_is_reported_as_unbounded(self, ref_chain):
        bare = strip_amp_noise(ref_chain)
        with pytest.warns(UserWarning):
            with pytest.raises(InfiniteSnrError):
                snr(bare, Excitation(pressure_pa=1.0), GRID, temperature_k=0.0)

    def test_higher_impedance_channels_win_on_snr(self, channel_chains):
        """The signal advantage of light loading outweighs the extra noise."""
        values = {
            ch: snr(chain, Excitation(pressure_pa=1.0), GRID)
            for ch, chain in channel_chains.items()
        }
        assert values[1] > values[2] > values[3] > values[4]

    def test_removing_the_cable_does_not_hurt_channel_one(self, channel_chains):
        chain = channel_chains[1]
        with_cable = snr(chain, Excitation(pressure_pa=1.0), GRID)
        without = snr(chain.with_cable_length(0.0), Excitation(pressure_pa=1.0), GRID)
        assert without >= with_cable

    def test_excitation_rejects_non_positive_pressure(self):
        with pytest.raises(InvalidParameterError):
            Excitation(pressure_pa=0.0)
