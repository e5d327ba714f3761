"""JSON scenario configuration: strict schema check, then semantic validation.

The schema lives in ``pixvlc/data/scenario.schema.json``. A string
``channel.calibration`` names a ``distance_m,snr_db`` CSV, looked up relative
to the config file first and then among the bundled data files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Union

import jsonschema

from pixvlc.channel import POWER_LAW, ChannelModel, load_calibration_csv
from pixvlc.errors import ValidationError
from pixvlc.modem import DEFAULT_SAMPLES_PER_SYMBOL, ModulationScheme
from pixvlc.pixel_array import PixelArray
from pixvlc.sim_pipeline import ScenarioConfig

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SweepSpec:
    distances: tuple[float, ...]
    orders: tuple[int, ...]
    target_ber: float = 1e-3


def schema() -> dict:
    return json.loads(resources.files("pixvlc.data").joinpath("scenario.schema.json").read_text())


def bundled_path(name: str) -> Path:
    """Filesystem path of a bundled data file."""
    return Path(str(resources.files("pixvlc.data").joinpath(name)))


def _resolve_calibration(ref, base_dir: Path):
    if not isinstance(ref, str):
        return [tuple(p) for p in ref]
    candidate = base_dir / ref
    if not candidate.exists():
        bundled = bundled_path(ref)
        if bundled.exists():
            candidate = bundled
    return load_calibration_csv(candidate)


def parse_config(raw: dict, base_dir: Union[str, Path] = ".") -> tuple[ScenarioConfig, Optional[SweepSpec]]:
    """Build a scenario from decoded JSON, reporting every violation at once."""
    validator = jsonschema.Draft202012Validator(schema())
    problems = [
        f"{'/'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
        for err in sorted(validator.iter_errors(raw), key=lambda e: list(map(str, e.absolute_path)))
    ]
    if problems:
        raise ValidationError(problems)

    arr, mod, chan = raw["array"], raw["modulation"], raw["channel"]
    try:
        array = PixelArray(arr["structure"], arr["count"], arr.get("total_diameter_mm", 20.0))
        scheme = ModulationScheme(
            mod["order"], mod.get("symbol_rate_hz", 200.0), mod.get("response_time_s")
        )
        calibration = _resolve_calibration(chan["calibration"], Path(base_dir))
        if chan.get("mode", "table") == POWER_LAW:
            channel = ChannelModel.fitted(calibration)
        else:
            channel = ChannelModel.from_table(calibration)
    except ValueError as exc:
        raise ValidationError([str(exc)]) from exc
    cfg = ScenarioConfig(
        array=array,
        scheme=scheme,
        channel=channel,
        distance_m=raw["distance_m"],
        n_bits=raw["n_bits"],
        seed=raw.get("seed", 0),
        samples_per_symbol=raw.get("samples_per_symbol", DEFAULT_SAMPLES_PER_SYMBOL),
        transition_tau_s=raw.get("transition_tau_s"),
    )
    sweep_raw = raw.get("sweep")
    if sweep_raw is None:
        cfg.validate()
        return cfg, None
    spec = SweepSpec(
        tuple(float(d) for d in sweep_raw["distances"]),
        tuple(int(m) for m in sweep_raw["orders"]),
        float(sweep_raw.get("target_ber", 1e-3)),
    )
    return cfg, spec


def load_config(path: Union[str, Path]) -> tuple[ScenarioConfig, Optional[SweepSpec]]:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError([f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}"]) from exc
    return parse_config(raw, path.parent)
