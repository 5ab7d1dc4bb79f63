"""End-to-end acceptance suite.

One test per acceptance criterion, named ``test_criterion_NN_*`` so a
verbose run prints one pass/fail line per criterion.  Every numeric
tolerance is stated in the assertion itself.  The module records its
import time; the final criterion asserts the whole suite stayed inside
its time budget, so it must remain the last test in this file.
"""

import json
import math
import time
from dataclasses import replace

import numpy as np
import pytest
from click.testing import CliRunner

from paik import (
    Excitation,
    FrequencyGrid,
    Spectrum,
    band_metrics,
    bessel_j0_roots,
    frequency_response,
    impulse_response,
    noise_psd,
    normalize,
    optimal_cable_length,
    radial_modes,
    reference,
    snr,
    sweep_grid,
)
from paik.cli import main as cli_main
from paik.klm import (
    circuit_three_port_response,
    guard_grid,
    open_circuit_input_impedance,
    short_circuit_input_impedance,
    short_circuit_reference,
    three_port_impedance,
)
from paik.noise import DEFAULT_TEMPERATURE, node_noise_terms
from paik.transfer import H1Inputs, h1, h2, open_circuit_gain
from paik.types import derived_constants

from oracles import (
    h2_distributed_cable,
    j0_roots_bisection,
    johnson_parallel_psd,
    nodal_h1,
)

_SUITE_START = time.perf_counter()

W5 = 2.0 * math.pi * 5.0e6
CHANNEL_ORDER = (4, 3, 2, 1)  # lowest to highest impedance magnitude


def rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


@pytest.fixture(scope="module")
def plate():
    return reference.reference_plate()


@pytest.fixture(scope="module")
def chains():
    return {ch: reference.reference_chain(channel=ch) for ch in CHANNEL_ORDER}


@pytest.fixture(scope="module")
def check_freqs(plate):
    return guard_grid(np.linspace(0.1e6, 20e6, 200), plate)


def test_criterion_01_open_circuit_collapses_to_clamped_capacitance(plate, check_freqs):
    """Open-face input impedance equals 1/(jwC0) to 1e-9 over 200 points,
    evaluated in under a second."""
    start = time.perf_counter()
    worst = 0.0
    for f in check_freqs:
        w = 2.0 * math.pi * float(f)
        want = 1.0 / (1j * w * derived_constants(plate, w).c0)
        worst = max(worst, rel(open_circuit_input_impedance(w, plate), want))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-9
    assert elapsed < 1.0


def test_criterion_02_short_circuit_matches_closed_form(plate, check_freqs):
    """Clamped-face input impedance matches its independent closed form to 1e-9."""
    worst = 0.0
    for f in check_freqs:
        w = 2.0 * math.pi * float(f)
        worst = max(
            worst, rel(short_circuit_input_impedance(w, plate), short_circuit_reference(w, plate))
        )
    assert worst <= 1e-9


def test_criterion_03_three_port_circuit_matches_impedance_matrix(plate):
    """100 random excitations agree between the assembled circuit and the
    impedance matrix to 1e-9; the matrix itself is symmetric to 1e-12."""
    rng = np.random.default_rng(314159)
    freqs = guard_grid(np.linspace(0.3e6, 19.5e6, 20), plate)
    worst_match = 0.0
    worst_sym = 0.0
    for f in freqs:
        w = 2.0 * math.pi * float(f)
        z = three_port_impedance(w, plate)
        worst_sym = max(worst_sym, float(np.max(np.abs(z - z.T)) / np.max(np.abs(z))))
        for _ in range(5):
            drive = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            want = z @ drive
            got = circuit_three_port_response(w, plate, *drive)
            worst_match = max(worst_match, max(rel(g, e) for g, e in zip(got, want)))
    assert worst_match <= 1e-9
    assert worst_sym <= 1e-12


def test_criterion_04_h1_matches_independent_nodal_analysis():
    """1000 random ladders agree with a from-scratch nodal solution to 1e-12."""
    rng = np.random.default_rng(12345)
    worst = 0.0
    for _ in range(1000):
        omega = 2.0 * math.pi * rng.uniform(1e5, 2e7)
        z_piezo = complex(rng.uniform(0.1, 1e3), rng.uniform(-1e3, 1e3))
        z_receiver = complex(rng.uniform(1.0, 1e3), rng.uniform(-500.0, 500.0))
        r = rng.uniform(0.0, 5.0)
        l = rng.uniform(0.0, 2e-6)
        c = rng.uniform(0.0, 1e-9)
        inputs = H1Inputs(
            z_piezo=z_piezo, r_cable=r, l_cable=l, c_cable=c, z_receiver=z_receiver
        )
        want = nodal_h1(omega, z_piezo, r, l, c, z_receiver)
        worst = max(worst, rel(h1(omega, inputs), want))
    assert worst <= 1e-12


def test_criterion_05_full_band_gain_factors_through_the_ladder(chains, plate):
    """h2 equals h1 (with the Thevenin source) times the no-load gain to
    1e-9 across the band for all four receiver channels."""
    freqs = guard_grid(np.linspace(0.1e6, 20e6, 200), plate)
    worst = 0.0
    for chain in chains.values():
        for f in freqs:
            w = 2.0 * math.pi * float(f)
            lhs = h2(w, chain)
            rhs = h1(w, H1Inputs.from_chain(w, chain, source="thevenin")) * open_circuit_gain(
                w, chain
            )
            worst = max(worst, rel(lhs, rhs))
    assert worst <= 1e-9


def test_criterion_06_pressure_referred_gain_is_area_invariant(chains):
    """Scaling the element area by 1/4 and 4 leaves gain * area unchanged
    to 1e-12."""
    chain = chains[4]
    worst = 0.0
    for f in np.linspace(0.5e6, 18e6, 10):
        w = 2.0 * math.pi * float(f)
        base = open_circuit_gain(w, chain) * chain.plate.area
        for scale in (0.25, 4.0):
            variant = chain.with_area(scale * chain.plate.area)
            got = open_circuit_gain(w, variant) * variant.plate.area
            worst = max(worst, rel(got, base))
    assert worst <= 1e-12


def test_criterion_07_lumped_cable_tracks_the_distributed_line(chains):
    """|H2| from the lumped T stays within 5 % of the exact RLGC line at
    5 MHz up to 3.5 m, and the deviation grows monotonically with length."""
    chain = chains[4]
    lengths = [0.5, 1.5, 2.5, 3.5, 5.0, 7.0, 9.0]
    deviations = []
    for length in lengths:
        variant = chain.with_cable_length(length)
        lumped = abs(h2(W5, variant))
        exact = abs(h2_distributed_cable(W5, variant))
        deviations.append(abs(lumped - exact) / exact)
    for length, dev in zip(lengths, deviations):
        if length <= 3.5:
            assert dev < 0.05, f"{length} m deviates {dev:.3%}"
    assert all(b > a for a, b in zip(deviations, deviations[1:]))


def test_criterion_08_sensitivity_trends_across_the_design_space(chains):
    """Four directional trends in under five seconds: (a) single-frequency
    gain rises with channel impedance; (b) the benefit of a 4x larger
    element shrinks as channel impedance rises; (c) on the highest channel
    every added metre of cable costs gain; (d) into a low-impedance
    receiver an interior cable-length optimum appears."""
    start = time.perf_counter()

    def mag(chain):
        return abs(h1(W5, H1Inputs.from_chain(W5, chain)))

    # (a) channel ordering at the working frequency
    gains = [mag(chains[ch]) for ch in CHANNEL_ORDER]
    assert gains == sorted(gains)
    assert len(set(gains)) == len(gains)

    # (b) area leverage falls with rising channel impedance
    ratios = []
    for ch in CHANNEL_ORDER:
        chain = chains[ch]
        big = chain.with_area(4.0 * chain.plate.area)
        ratios.append(mag(big) / mag(chain))
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[0] > 1.0

    # (c) monotone loss with cable length on channel 1
    lengths = np.linspace(1.5, 3.5, 21)
    profile = [mag(chains[1].with_cable_length(float(l))) for l in lengths]
    assert all(b < a for a, b in zip(profile, profile[1:]))

    # (d) interior optimum for the low-impedance receiver
    low = chains[4].with_receiver(reference.LOW_IMPEDANCE_RECEIVER)
    out = optimal_cable_length(low, (0.5, 10.0), 5.0e6)
    assert 0.55 < out["cl_opt"] < 9.95
    edge = max(mag(low.with_cable_length(0.5)), mag(low.with_cable_length(10.0)))
    assert out["sensitivity"] > edge

    assert time.perf_counter() - start < 5.0


def test_criterion_09_loading_trades_bandwidth_against_center_frequency(chains):
    """From the heaviest to the lightest loading the -6 dB bandwidth widens
    and the band center moves down, monotonically across all four channels."""
    grid = FrequencyGrid(0.05e6, 20e6, 800)
    bandwidths = []
    centers = []
    for ch in CHANNEL_ORDER:
        bm = band_metrics(frequency_response(chains[ch], grid))
        bandwidths.append(bm.bandwidth)
        centers.append(bm.f_center)
    assert all(b > a for a, b in zip(bandwidths, bandwidths[1:]))
    assert all(b < a for a, b in zip(centers, centers[1:]))


def test_criterion_10_radial_mode_ladder():
    """The 3 mm reference disc rings at 0.400 MHz within 0.5 %; the Bessel
    roots match an independent bisection to 1e-12; f_n scales exactly as
    1/diameter to 1e-12."""
    f1 = radial_modes(3.0e-3, 1568.0, count=1).modes[0].f_n
    assert abs(f1 - 0.400e6) / 0.400e6 <= 0.005

    got = bessel_j0_roots(8)
    want = j0_roots_bisection(8)
    assert max(abs(g - w) / w for g, w in zip(got, want)) <= 1e-12

    base = radial_modes(3.0e-3, 1568.0, count=5).frequencies() * 3.0e-3
    for scale in (0.5, 2.0, 3.7):
        d = scale * 3.0e-3
        other = radial_modes(d, 1568.0, count=5).frequencies() * d
        assert float(np.max(np.abs(other - base) / base)) <= 1e-12


def test_criterion_11_impulse_response_is_real_causal_and_energy_consistent(chains):
    """Imaginary residue below 1e-10 of the peak, Parseval balance to 1e-9,
    and a pure-delay spectrum lands within one sample of its delay."""
    chain = chains[4]
    grid = FrequencyGrid(0.05e6, 20e6, 400)  # 50 kHz bins, aligned
    spec = frequency_response(chain, grid)
    fs = 2.0 * grid.f_max
    wave = impulse_response(spec, fs)

    # recompute the complex inverse transform here to expose the residue
    df = spec.freqs[1] - spec.freqs[0]
    n_nyquist = int(round(fs / 2.0 / df))
    one_sided = np.zeros(n_nyquist + 1, dtype=complex)
    one_sided[np.rint(spec.freqs / df).astype(int)] = spec.values
    one_sided[0] = 0.0
    one_sided[-1] = one_sided[-1].real
    full = np.concatenate([one_sided, one_sided[-2:0:-1].conj()])
    h_complex = np.fft.ifft(full)
    peak = float(np.max(np.abs(h_complex)))
    assert float(np.max(np.abs(h_complex.imag))) <= 1e-10 * peak

    # Parseval: time-domain energy against the one-sided spectral sum
    n = wave.values.size
    spectral = (
        2.0 * float(np.sum(np.abs(one_sided[1:-1]) ** 2)) + abs(one_sided[-1]) ** 2
    ) / n
    assert float(np.sum(wave.values**2)) == pytest.approx(spectral, rel=1e-9)

    # delayed all-pass spectrum peaks at the right sample
    n_bins = 256
    df2 = 50e3
    fs2 = 2.0 * n_bins * df2
    delay_samples = 41
    freqs2 = df2 * np.arange(1, n_bins + 1)
    delayed = np.exp(-2j * math.pi * freqs2 * delay_samples / fs2)
    wave2 = impulse_response(Spectrum(freqs2, delayed), fs2)
    assert abs(int(np.argmax(np.abs(wave2.values))) - delay_samples) <= 1


def test_criterion_12_noise_floor_and_snr_saturation(chains):
    """Resistive divider noise matches 4kT(R1||R2) to 1e-9; SNR never falls
    as channel impedance rises but its slope against |Z| strictly shrinks;
    channel 1 carries the highest noise density."""
    for r1, r2 in ((50.0, 50.0), (404.0, 51.0), (30.0, 1e3)):
        src, rec, _, _ = node_noise_terms(complex(r1), complex(r2))
        want = johnson_parallel_psd(r1, r2, DEFAULT_TEMPERATURE)
        assert rel(src + rec, want) <= 1e-9

    grid = FrequencyGrid(0.05e6, 20e6, 800)
    excitation = Excitation(pressure_pa=1.0)
    magnitudes = []
    snrs = []
    for ch in CHANNEL_ORDER:
        magnitudes.append(abs(chains[ch].receiver.impedance))
        snrs.append(snr(chains[ch], excitation, grid))
    assert all(b >= a for a, b in zip(snrs, snrs[1:]))
    slopes = [
        (s2 - s1) / (m2 - m1)
        for (s1, s2, m1, m2) in zip(snrs, snrs[1:], magnitudes, magnitudes[1:])
    ]
    assert all(b < a for a, b in zip(slopes, slopes[1:]))

    densities = {ch: noise_psd(chains[ch], grid).band_avg() for ch in CHANNEL_ORDER}
    assert densities[1] == max(densities.values())
    assert densities[1] > densities[2] > densities[3] > densities[4]


def test_criterion_13_deterministic_tool_runs_within_the_time_budget(
    tmp_path, configs_dir
):
    """validate, freq-response and sweep reruns are byte identical, and the
    whole acceptance module finishes inside 60 seconds."""
    runner = CliRunner()
    ref_cfg = str(configs_dir / "reference_chain.json")
    sweep_cfg = str(configs_dir / "sweep_example.json")

    first = runner.invoke(cli_main, ["validate", "--config", ref_cfg])
    second = runner.invoke(cli_main, ["validate", "--config", ref_cfg])
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output

    fr_args = ["freq-response", "--config", ref_cfg, "--grid", "1e5,2e7,150"]
    out_a, out_b = tmp_path / "fr_a", tmp_path / "fr_b"
    assert runner.invoke(cli_main, fr_args + ["--out", str(out_a)]).exit_code == 0
    assert runner.invoke(cli_main, fr_args + ["--out", str(out_b)]).exit_code == 0
    for name in ("freq_response.csv", "freq_response.svg"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name

    out_c, out_d = tmp_path / "sw_a", tmp_path / "sw_b"
    assert runner.invoke(
        cli_main, ["sweep", "--config", sweep_cfg, "--out", str(out_c)]
    ).exit_code == 0
    assert runner.invoke(
        cli_main, ["sweep", "--config", sweep_cfg, "--out", str(out_d)]
    ).exit_code == 0
    for name in ("sweep.csv", "sweep.json", "sweep.svg"):
        assert (out_c / name).read_bytes() == (out_d / name).read_bytes(), name
    # the two manifests legitimately differ in out_dir only
    doc_c = json.loads((out_c / "manifest.json").read_text())
    doc_d = json.loads((out_d / "manifest.json").read_text())
    doc_c.pop("out_dir"), doc_d.pop("out_dir")
    assert doc_c == doc_d

    assert time.perf_counter() - _SUITE_START < 60.0
