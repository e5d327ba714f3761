"""Solar harvest versus microcontroller and shutter consumption."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Union

import numpy as np

from pixvlc.errors import LevelRangeError

LUX_TO_FLUX_W_PER_CM2 = 1.46e-7
LCD_REFERENCE_HZ = 200.0
DCO = "dco"
VLO = "vlo"
_TABLE_FILES = {DCO: "table1_dco.csv", VLO: "table2_vlo.csv"}


@dataclass(frozen=True)
class HarvestParams:
    illuminance_lux: float = 200.0
    solar_area_cm2: float = 25.0
    solar_efficiency: float = 0.40
    lux_to_flux: float = LUX_TO_FLUX_W_PER_CM2

    def __post_init__(self):
        if self.illuminance_lux < 0:
            raise ValueError("illuminance_lux must be non-negative")
        if not self.solar_area_cm2 > 0:
            raise ValueError("solar_area_cm2 must be positive")
        if not 0 < self.solar_efficiency <= 1:
            raise ValueError("solar_efficiency must lie in (0, 1]")
        if not self.lux_to_flux > 0:
            raise ValueError("lux_to_flux must be positive")


@dataclass(frozen=True)
class ConsumptionModel:
    """Supply current versus modulation frequency, plus an LCD load term.

    The LCD term is ``lcd_power_uW_at_200hz * f / 200``.
    """

    clock_source: str
    current_table: tuple[tuple[float, float], ...]
    supply_voltage_v: float = 3.0
    lcd_power_uW_at_200hz: float = 0.2

    def __post_init__(self):
        table = tuple((float(f), float(i)) for f, i in self.current_table)
        object.__setattr__(self, "current_table", table)
        if not table:
            raise ValueError("current table is empty")
        freqs = [f for f, _ in table]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("current table frequencies must be strictly increasing")
        if any(i <= 0 for _, i in table):
            raise ValueError("currents must be positive")
        if not self.supply_voltage_v > 0:
            raise ValueError("supply_voltage_v must be positive")
        if self.lcd_power_uW_at_200hz < 0:
            raise ValueError("lcd_power_uW_at_200hz must be non-negative")

    @classmethod
    def measured(cls, clock_source: str, **kwargs) -> ConsumptionModel:
        """Model built from the bundled 3 V measurement table for ``dco`` or ``vlo``."""
        key = clock_source.lower()
        if key not in _TABLE_FILES:
            raise ValueError(f"unknown clock source {clock_source!r}")
        ref = resources.files("pixvlc.data").joinpath(_TABLE_FILES[key])
        with resources.as_file(ref) as path:
            table = load_current_table(path)
        return cls(key, tuple(table), **kwargs)


@dataclass(frozen=True)
class EnergyBudget:
    harvested_uW: float
    consumed_uW: float
    margin_uW: float
    feasible: bool


def harvested_power(p: HarvestParams) -> float:
    """Electrical power from the solar cell in microwatts."""
    watts = p.lux_to_flux * p.illuminance_lux * p.solar_area_cm2 * p.solar_efficiency
    return watts * 1e6


def consumption_power(m: ConsumptionModel, modulation_frequency_hz: float) -> float:
    """Device draw in microwatts at the given modulation frequency."""
    freqs = [f for f, _ in m.current_table]
    if not freqs[0] <= modulation_frequency_hz <= freqs[-1]:
        raise LevelRangeError(
            f"modulation frequency {modulation_frequency_hz} Hz outside measured range "
            f"[{freqs[0]:g}, {freqs[-1]:g}] Hz"
        )
    current_uA = float(np.interp(modulation_frequency_hz, freqs, [i for _, i in m.current_table]))
    lcd = m.lcd_power_uW_at_200hz * modulation_frequency_hz / LCD_REFERENCE_HZ
    return m.supply_voltage_v * current_uA + lcd


def feasibility(p: HarvestParams, m: ConsumptionModel, modulation_frequency_hz: float) -> EnergyBudget:
    harvested = harvested_power(p)
    consumed = consumption_power(m, modulation_frequency_hz)
    margin = harvested - consumed
    return EnergyBudget(harvested, consumed, margin, margin >= 0)


def load_current_table(path: Union[str, Path]) -> list[tuple[float, float]]:
    """Read ``frequency_hz,current_uA`` rows."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"frequency_hz", "current_uA"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: header must contain frequency_hz,current_uA")
        rows = []
        for row in reader:
            try:
                rows.append((float(row["frequency_hz"]), float(row["current_uA"])))
            except (TypeError, ValueError):
                raise ValueError(f"{path}: line {reader.line_num}: malformed row {row}") from None
    return rows
