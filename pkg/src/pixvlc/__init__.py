"""Simulation and analysis toolkit for pixelated VLC backscatter links."""

from pixvlc.ber import (
    BerReport,
    ber_analytic,
    estimate_ber_monte_carlo,
    q_function,
    required_snr,
)
from pixvlc.channel import ChannelModel, PowerLawFit, apply_channel, fit_power_law
from pixvlc.energy import (
    ConsumptionModel,
    EnergyBudget,
    HarvestParams,
    consumption_power,
    feasibility,
    harvested_power,
)
from pixvlc.link_adapt import (
    AdaptationDecision,
    AdaptationPolicy,
    adaptation_table,
    select_modulation,
)
from pixvlc.modem import (
    ModulationScheme,
    Waveform,
    bits_to_symbols,
    detect,
    modulate,
    symbols_to_bits,
)
from pixvlc.pixel_array import PixelArray, PixelState
from pixvlc.sim_pipeline import ScenarioConfig, ScenarioResult, run_scenario, sweep

__version__ = "0.1.0"

__all__ = [
    "AdaptationDecision", "AdaptationPolicy", "BerReport", "ChannelModel",
    "ConsumptionModel", "EnergyBudget", "HarvestParams", "ModulationScheme",
    "PixelArray", "PixelState", "PowerLawFit", "ScenarioConfig", "ScenarioResult",
    "Waveform", "adaptation_table", "apply_channel", "ber_analytic", "bits_to_symbols",
    "consumption_power", "detect", "estimate_ber_monte_carlo", "feasibility",
    "fit_power_law", "harvested_power", "modulate", "q_function", "required_snr",
    "run_scenario", "select_modulation", "sweep", "symbols_to_bits",
]
