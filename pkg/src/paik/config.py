"""JSON configuration loading with strict schema validation.

A config file describes one readout chain plus optional sweep and
resonance sections consumed by the command-line tool.  Validation is
strict on purpose: any key the schema does not know is a hard error that
lists the offending dotted paths, so typos never degrade silently into
defaults.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, InvalidParameterError, ModelError
from .types import FrequencyGrid, ReadoutChain

SCHEMA_VERSION = 1

_PLATE_KEYS = {
    "thickness_m",
    "density_kg_m3",
    "stiffness_c33d_pa",
    "h33_v_per_m",
    "eps33s_f_per_m",
    "area_m2",
    "diameter_m",
    "shear_velocity_m_s",
}
_PLATE_REQUIRED = {
    "thickness_m",
    "density_kg_m3",
    "stiffness_c33d_pa",
    "h33_v_per_m",
    "eps33s_f_per_m",
    "area_m2",
}
_LAYER_KEYS = {"thickness_m", "density_kg_m3", "velocity_m_s"}
_MEDIUM_KEYS = {"specific_impedance_rayl"}
_CABLE_KEYS = {
    "length_m",
    "resistance_ohm_per_m",
    "inductance_h_per_m",
    "capacitance_f_per_m",
}
_AMP_KEYS = {"voltage_v_per_rthz", "current_a_per_rthz"}
_TABLE_KEYS = {"freq_hz", "real_ohm", "imag_ohm"}
_RECEIVER_KEYS = {"impedance_ohm", "noise"}
_CHAIN_KEYS = {"plate", "backing_layer", "matching_layer", "medium", "cable", "receiver"}
_GRID_KEYS = {"f_min_hz", "f_max_hz", "n_points"}
_AXES_KEYS = {"area_m2", "diameter_m", "cable_length_m", "receiver_impedance_ohm"}
_SWEEP_KEYS = {
    "metric",
    "frequency_hz",
    "grid",
    "band_hz",
    "pressure_pa",
    "level_db",
    "axes",
    "normalize_to",
}
_FIT_KEYS = {"diameters_m", "rel_jitter"}
_RESONANCE_KEYS = {"mode_count", "diameter_m", "shear_velocity_m_s", "fit"}
_TOP_KEYS = {"schema_version", "chain", "sweep", "resonance"}


def _check_keys(
    block: dict,
    allowed: set[str],
    required: set[str],
    path: str,
    unknown: list[str],
    missing: list[str],
):
    if not isinstance(block, dict):
        raise ConfigError(f"{path or 'config'} must be an object, got {type(block).__name__}")
    for key in block:
        if key not in allowed:
            unknown.append(f"{path}.{key}" if path else key)
    for key in sorted(required - set(block)):
        missing.append(f"{path}.{key}" if path else key)


def _validate_tree(raw: dict) -> tuple[list[str], list[str]]:
    unknown: list[str] = []
    missing: list[str] = []
    _check_keys(raw, _TOP_KEYS, {"schema_version", "chain"}, "", unknown, missing)
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {version!r}; this tool reads version {SCHEMA_VERSION}"
        )
    chain = raw.get("chain", {})
    _check_keys(chain, _CHAIN_KEYS, _CHAIN_KEYS - {"matching_layer"}, "chain", unknown, missing)
    if isinstance(chain, dict):
        if isinstance(chain.get("plate"), dict):
            _check_keys(chain["plate"], _PLATE_KEYS, _PLATE_REQUIRED, "chain.plate", unknown, missing)
        for name in ("backing_layer", "matching_layer"):
            if isinstance(chain.get(name), dict):
                _check_keys(chain[name], _LAYER_KEYS, _LAYER_KEYS, f"chain.{name}", unknown, missing)
        if isinstance(chain.get("medium"), dict):
            _check_keys(chain["medium"], _MEDIUM_KEYS, _MEDIUM_KEYS, "chain.medium", unknown, missing)
        if isinstance(chain.get("cable"), dict):
            _check_keys(chain["cable"], _CABLE_KEYS, _CABLE_KEYS, "chain.cable", unknown, missing)
        receiver = chain.get("receiver")
        if isinstance(receiver, dict):
            _check_keys(receiver, _RECEIVER_KEYS, {"impedance_ohm"}, "chain.receiver", unknown, missing)
            if isinstance(receiver.get("impedance_ohm"), dict):
                _check_keys(
                    receiver["impedance_ohm"],
                    _TABLE_KEYS,
                    _TABLE_KEYS,
                    "chain.receiver.impedance_ohm",
                    unknown,
                    missing,
                )
            if isinstance(receiver.get("noise"), dict):
                _check_keys(receiver["noise"], _AMP_KEYS, _AMP_KEYS, "chain.receiver.noise", unknown, missing)
    sweep = raw.get("sweep")
    if sweep is not None:
        _check_keys(sweep, _SWEEP_KEYS, {"metric", "axes"}, "sweep", unknown, missing)
        if isinstance(sweep, dict):
            if isinstance(sweep.get("axes"), dict):
                _check_keys(sweep["axes"], _AXES_KEYS, set(), "sweep.axes", unknown, missing)
            if isinstance(sweep.get("grid"), dict):
                _check_keys(sweep["grid"], _GRID_KEYS, _GRID_KEYS, "sweep.grid", unknown, missing)
            if isinstance(sweep.get("normalize_to"), dict):
                _check_keys(sweep["normalize_to"], _AXES_KEYS, set(), "sweep.normalize_to", unknown, missing)
    resonance = raw.get("resonance")
    if resonance is not None:
        _check_keys(resonance, _RESONANCE_KEYS, set(), "resonance", unknown, missing)
        if isinstance(resonance, dict) and isinstance(resonance.get("fit"), dict):
            _check_keys(resonance["fit"], _FIT_KEYS, {"diameters_m"}, "resonance.fit", unknown, missing)
    return unknown, missing


@dataclass(frozen=True)
class LoadedConfig:
    """Validated configuration: the chain plus optional tool sections."""

    chain: ReadoutChain
    sweep: dict | None
    resonance: dict | None
    path: Path
    sha256: str


def load_config(path: str | Path) -> LoadedConfig:
    """Read, validate and build a configuration from a JSON file.

    Raises :class:`ConfigError` for unreadable files, schema violations,
    unknown fields (listed by dotted path) and physically invalid values.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must hold a JSON object at top level")

    unknown, missing = _validate_tree(raw)
    problems = []
    if unknown:
        problems.append("unknown config fields: " + ", ".join(sorted(unknown)))
    if missing:
        problems.append("missing required fields: " + ", ".join(missing))
    if problems:
        raise ConfigError("; ".join(problems))

    try:
        chain = ReadoutChain.from_dict(raw["chain"])
    except (KeyError, TypeError, IndexError) as exc:
        raise ConfigError(f"config {path} chain section is malformed: {exc!r}") from exc
    except (InvalidParameterError, ModelError) as exc:
        raise ConfigError(f"config {path} rejected: {exc}") from exc

    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return LoadedConfig(
        chain=chain,
        sweep=raw.get("sweep"),
        resonance=raw.get("resonance"),
        path=path,
        sha256=digest,
    )


def sweep_axes_from_config(block: dict, chain: ReadoutChain) -> dict:
    """Convert a config axes block to sweep axes, folding diameter to area."""
    raw_axes = block.get("axes", {})
    axes: dict = {}
    if "area_m2" in raw_axes and "diameter_m" in raw_axes:
        raise ConfigError("sweep.axes cannot give both area_m2 and diameter_m")
    if "area_m2" in raw_axes:
        axes["area"] = [float(a) for a in raw_axes["area_m2"]]
    if "diameter_m" in raw_axes:
        axes["area"] = [math.pi * float(d) ** 2 / 4.0 for d in raw_axes["diameter_m"]]
    if "cable_length_m" in raw_axes:
        axes["cable_length"] = [float(v) for v in raw_axes["cable_length_m"]]
    if "receiver_impedance_ohm" in raw_axes:
        axes["receiver_impedance"] = [
            complex(pair[0], pair[1]) for pair in raw_axes["receiver_impedance_ohm"]
        ]
    if not axes:
        raise ConfigError("sweep.axes must name at least one axis")
    return axes


def normalize_point_from_config(block: dict) -> dict | None:
    """Convert a normalize_to block to a sweep reference point, or None."""
    raw = block.get("normalize_to")
    if raw is None:
        return None
    point: dict = {}
    if "area_m2" in raw and "diameter_m" in raw:
        raise ConfigError("sweep.normalize_to cannot give both area_m2 and diameter_m")
    if "area_m2" in raw:
        point["area"] = float(raw["area_m2"])
    if "diameter_m" in raw:
        point["area"] = math.pi * float(raw["diameter_m"]) ** 2 / 4.0
    if "cable_length_m" in raw:
        point["cable_length"] = float(raw["cable_length_m"])
    if "receiver_impedance_ohm" in raw:
        pair = raw["receiver_impedance_ohm"]
        point["receiver_impedance"] = complex(pair[0], pair[1])
    if not point:
        raise ConfigError("sweep.normalize_to must fix at least one axis")
    return point


def grid_from_config(block: dict | None, fallback: FrequencyGrid) -> FrequencyGrid:
    if block is None:
        return fallback
    try:
        return FrequencyGrid.from_dict(block)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"sweep.grid is malformed: {exc!r}") from exc
    except InvalidParameterError as exc:
        raise ConfigError(f"sweep.grid rejected: {exc}") from exc
