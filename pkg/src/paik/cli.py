"""Command-line entry point.

Every data-producing subcommand reads one JSON config, writes its outputs
into ``--out`` and drops a ``manifest.json`` beside them recording the
tool version, the resolved parameters and the config content hash.
Reruns with an identical manifest produce byte-identical files.

Exit codes: 0 success, 2 configuration problem, 3 numerical singularity.
"""

from __future__ import annotations

import functools
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click
import numpy as np

from . import __version__
from .checks import run_identity_checks
from .config import (
    LoadedConfig,
    grid_from_config,
    load_config,
    normalize_point_from_config,
    sweep_axes_from_config,
)
from .errors import ConfigError, InvalidParameterError, SingularFrequencyError
from .exports import (
    write_fit_json,
    write_fit_points_csv,
    write_modes_csv,
    write_noise_csv,
    write_spectrum_csv,
    write_sweep_csv,
    write_sweep_json,
    write_waveform_csv,
)
from .noise import Excitation, noise_psd
from .resonance import fit_inverse_diameter, jittered_fit_points, radial_modes
from .response import chain_impulse_response, frequency_response
from .sweep import normalize, sweep_grid
from .types import FrequencyGrid


@dataclass(frozen=True)
class RunManifest:
    """Record of one tool invocation, written next to its outputs."""

    subcommand: str
    config_path: str
    config_sha256: str
    out_dir: str
    parameters: dict
    outputs: list[str]
    tool: str = "paik"
    version: str = field(default=__version__)

    def write(self, path: Path) -> Path:
        doc = asdict(self)
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path


def _emit_manifest(
    out_dir: Path, subcommand: str, cfg: LoadedConfig, parameters: dict, outputs: list[Path]
) -> None:
    manifest = RunManifest(
        subcommand=subcommand,
        config_path=str(cfg.path),
        config_sha256=cfg.sha256,
        out_dir=str(out_dir),
        parameters=parameters,
        outputs=sorted(p.name for p in outputs),
    )
    manifest.write(out_dir / "manifest.json")


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SingularFrequencyError as exc:
            click.echo(f"numerical singularity: {exc}", err=True)
            raise SystemExit(3) from exc
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            raise SystemExit(2) from exc
        except InvalidParameterError as exc:
            click.echo(f"invalid parameter: {exc}", err=True)
            raise SystemExit(2) from exc

    return wrapper


def _parse_grid(ctx, param, value):
    if value is None:
        return None
    parts = value.split(",")
    if len(parts) != 3:
        raise click.BadParameter("expected fmin,fmax,n")
    try:
        f_min, f_max, n = float(parts[0]), float(parts[1]), int(parts[2])
        return FrequencyGrid(f_min if f_min > 0 else f_max / n, f_max, n)
    except (ValueError, InvalidParameterError) as exc:
        raise click.BadParameter(str(exc)) from exc


def _config_option(fn):
    return click.option(
        "--config",
        "config_path",
        required=True,
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="JSON chain configuration.",
    )(fn)


def _out_option(fn):
    return click.option(
        "--out",
        "out_dir",
        default="out",
        show_default=True,
        type=click.Path(file_okay=False, path_type=Path),
        help="Output directory (created if missing).",
    )(fn)


def _plot_option(fn):
    return click.option(
        "--plot/--no-plot",
        "do_plot",
        default=True,
        show_default=True,
        help="Also render SVG figures.",
    )(fn)


def _grid_option(default: str):
    def deco(fn):
        return click.option(
            "--grid",
            default=default,
            show_default=True,
            callback=_parse_grid,
            help="Frequency grid as fmin,fmax,n in Hz.",
        )(fn)

    return deco


def _prepare_out(out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


@click.group()
@click.version_option(__version__, prog_name="paik")
def main():
    """Receive-chain modeling for piezoelectric ultrasound readout."""


@main.command("freq-response")
@_config_option
@_out_option
@_grid_option("1e5,2e7,800")
@_plot_option
@_guarded
def freq_response_cmd(config_path: Path, out_dir: Path, grid: FrequencyGrid, do_plot: bool):
    """Full-band receive transfer function to CSV (and SVG)."""
    cfg = load_config(config_path)
    out_dir = _prepare_out(out_dir)
    spec = frequency_response(cfg.chain, grid)
    outputs = [write_spectrum_csv(spec, out_dir / "freq_response.csv")]
    if do_plot:
        from .plots import save_spectrum_plot

        outputs.append(
            save_spectrum_plot(spec, out_dir / "freq_response.svg", title="receive response")
        )
    _emit_manifest(
        out_dir,
        "freq-response",
        cfg,
        {"grid": grid.to_dict(), "pressure_referred": True, "plot": do_plot},
        outputs,
    )
    click.echo(f"wrote {len(outputs)} files to {out_dir}")


@main.command("impulse")
@_config_option
@_out_option
@_grid_option("0,2e7,400")
@click.option("--fs", type=float, default=None, help="Sample rate in Hz (default 2*fmax).")
@_plot_option
@_guarded
def impulse_cmd(config_path: Path, out_dir: Path, grid: FrequencyGrid, fs: float | None, do_plot: bool):
    """Band-limited impulse response to CSV (and SVG).

    The grid is realigned so every bin is an integer multiple of the bin
    width, which the inverse transform requires.
    """
    cfg = load_config(config_path)
    out_dir = _prepare_out(out_dir)
    n = grid.n_points
    df = grid.f_max / n
    k_lo = max(1, int(round(grid.f_min / df)))
    aligned = FrequencyGrid(k_lo * df, grid.f_max, n - k_lo + 1)
    if fs is None:
        fs = 2.0 * aligned.f_max
    wave = chain_impulse_response(cfg.chain, aligned, fs=fs)
    outputs = [write_waveform_csv(wave, out_dir / "impulse.csv")]
    if do_plot:
        from .plots import save_waveform_plot

        outputs.append(
            save_waveform_plot(wave, out_dir / "impulse.svg", title="impulse response")
        )
    _emit_manifest(
        out_dir,
        "impulse",
        cfg,
        {"grid": aligned.to_dict(), "fs_hz": fs, "plot": do_plot},
        outputs,
    )
    click.echo(f"wrote {len(outputs)} files to {out_dir}")


@main.command("sweep")
@_config_option
@_out_option
@click.option(
    "--metric",
    type=click.Choice(["h1_mag_at_f", "h2_band", "snr"]),
    default=None,
    help="Override the metric named in the config sweep section.",
)
@_plot_option
@_guarded
def sweep_cmd(config_path: Path, out_dir: Path, metric: str | None, do_plot: bool):
    """Parameter sweep defined by the config's sweep section."""
    cfg = load_config(config_path)
    if cfg.sweep is None:
        raise ConfigError("config has no sweep section")
    out_dir = _prepare_out(out_dir)
    block = cfg.sweep
    metric = metric or block["metric"]
    axes = sweep_axes_from_config(block, cfg.chain)
    grid = grid_from_config(block.get("grid"), FrequencyGrid(1e5, 2e7, 400))
    f = block.get("frequency_hz")
    band = tuple(block["band_hz"]) if "band_hz" in block else None
    excitation = Excitation(pressure_pa=float(block.get("pressure_pa", 1.0)))
    level_db = float(block.get("level_db", -6.0))

    result = sweep_grid(
        cfg.chain,
        axes,
        metric,
        f=f,
        grid=grid,
        excitation=excitation,
        band=band,
        level_db=level_db,
    )
    reference = normalize_point_from_config(block)
    if reference is not None:
        result = normalize(result, reference)

    outputs = [
        write_sweep_csv(result, out_dir / "sweep.csv"),
        write_sweep_json(result, out_dir / "sweep.json"),
    ]
    if do_plot:
        from .plots import save_sweep_plot

        outputs.append(save_sweep_plot(result, out_dir / "sweep.svg", title=f"sweep: {metric}"))
    _emit_manifest(
        out_dir,
        "sweep",
        cfg,
        {
            "metric": metric,
            "grid": grid.to_dict(),
            "frequency_hz": f,
            "normalized": reference is not None,
            "plot": do_plot,
        },
        outputs,
    )
    click.echo(f"wrote {len(outputs)} files to {out_dir}")


@main.command("noise")
@_config_option
@_out_option
@_grid_option("1e5,2e7,400")
@click.option("--temperature", type=float, default=293.0, show_default=True, help="Kelvin.")
@_plot_option
@_guarded
def noise_cmd(
    config_path: Path, out_dir: Path, grid: FrequencyGrid, temperature: float, do_plot: bool
):
    """Noise budget at the receiver node to CSV (and SVG)."""
    cfg = load_config(config_path)
    out_dir = _prepare_out(out_dir)
    budget = noise_psd(cfg.chain, grid, temperature_k=temperature)
    outputs = [write_noise_csv(budget, out_dir / "noise.csv")]
    if do_plot:
        from .plots import save_noise_plot

        outputs.append(save_noise_plot(budget, out_dir / "noise.svg", title="noise budget"))
    _emit_manifest(
        out_dir,
        "noise",
        cfg,
        {"grid": grid.to_dict(), "temperature_k": temperature, "plot": do_plot},
        outputs,
    )
    click.echo(f"wrote {len(outputs)} files to {out_dir}")


@main.command("resonance")
@_config_option
@_out_option
@click.option("--seed", type=int, default=0, show_default=True, help="Jitter seed for the fit.")
@_guarded
def resonance_cmd(config_path: Path, out_dir: Path, seed: int):
    """Radial mode table (and optional synthetic inverse-diameter fit)."""
    cfg = load_config(config_path)
    out_dir = _prepare_out(out_dir)
    block = cfg.resonance or {}
    diameter = block.get("diameter_m", cfg.chain.plate.diameter)
    v_shear = block.get("shear_velocity_m_s", cfg.chain.plate.shear_velocity)
    if diameter is None:
        raise ConfigError("no diameter: set resonance.diameter_m or chain.plate.diameter_m")
    if v_shear is None:
        raise ConfigError(
            "no shear velocity: set resonance.shear_velocity_m_s or "
            "chain.plate.shear_velocity_m_s"
        )
    count = int(block.get("mode_count", 5))
    modes = radial_modes(float(diameter), float(v_shear), count)
    outputs = [write_modes_csv(modes, out_dir / "modes.csv")]

    fit_block = block.get("fit")
    if fit_block is not None:
        rng = np.random.default_rng(seed)
        points = jittered_fit_points(
            [float(d) for d in fit_block["diameters_m"]],
            float(v_shear),
            float(fit_block.get("rel_jitter", 0.0)),
            rng,
        )
        fit = fit_inverse_diameter(points)
        outputs.append(write_fit_points_csv(points, out_dir / "fit_points.csv"))
        outputs.append(write_fit_json(fit, out_dir / "fit.json"))

    _emit_manifest(
        out_dir,
        "resonance",
        cfg,
        {
            "diameter_m": float(diameter),
            "shear_velocity_m_s": float(v_shear),
            "mode_count": count,
            "seed": seed,
        },
        outputs,
    )
    click.echo(f"wrote {len(outputs)} files to {out_dir}")


@main.command("validate")
@_config_option
@_guarded
def validate_cmd(config_path: Path):
    """Run the analytic identity suite against the configured chain."""
    cfg = load_config(config_path)
    checks = run_identity_checks(cfg.chain)
    all_ok = True
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        all_ok &= check.passed
        click.echo(
            f"{status}  {check.name:<26s} max rel err {check.error:.3e} "
            f"(tol {check.tolerance:.0e})"
        )
    if not all_ok:
        click.echo("identity suite FAILED", err=True)
        raise SystemExit(1)
    click.echo("all identities hold")
