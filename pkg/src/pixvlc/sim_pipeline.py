"""End-to-end transmit, reflect, receive simulation and distance/order sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from pixvlc.ber import ber_analytic_db
from pixvlc.channel import ChannelModel, apply_channel, snr_at_distance
from pixvlc.errors import PixVlcError, ValidationError
from pixvlc.modem import (
    DEFAULT_SAMPLES_PER_SYMBOL,
    ModulationScheme,
    bits_to_symbols,
    detect,
    modulate,
    symbols_to_bits,
)
from pixvlc.pixel_array import BINARY_WEIGHTED, PixelArray, levels_available, level_fractions

CHUNK_SYMBOLS = 20_000
Seed = Union[int, Sequence[int]]


@dataclass(frozen=True)
class ScenarioConfig:
    array: PixelArray
    scheme: ModulationScheme
    channel: ChannelModel
    distance_m: float
    n_bits: int
    seed: Seed = 0
    samples_per_symbol: int = DEFAULT_SAMPLES_PER_SYMBOL
    transition_tau_s: Optional[float] = None

    def problems(self) -> list[str]:
        """Every invariant violation, empty when the config is valid."""
        out = []
        levels = levels_available(self.array)
        if levels < self.scheme.order:
            out.append(f"levels_available({levels}) < {self.scheme.order}")
        else:
            try:
                level_fractions(self.array, self.scheme.order)
            except PixVlcError as exc:
                out.append(str(exc))
        if int(self.n_bits) != self.n_bits or self.n_bits < 1:
            out.append(f"n_bits must be a positive integer, got {self.n_bits}")
        elif self.n_bits % self.scheme.bits_per_symbol:
            out.append(
                f"n_bits {self.n_bits} not divisible by log2(M) = {self.scheme.bits_per_symbol}"
            )
        if int(self.samples_per_symbol) != self.samples_per_symbol or self.samples_per_symbol < 1:
            out.append(f"samples_per_symbol must be a positive integer, got {self.samples_per_symbol}")
        if self.transition_tau_s is not None and not self.transition_tau_s > 0:
            out.append("transition_tau_s must be positive when given")
        try:
            snr_at_distance(self.channel, self.distance_m)
        except PixVlcError as exc:
            out.append(str(exc))
        return out

    def validate(self) -> None:
        problems = self.problems()
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class ScenarioResult:
    measured_ber: float
    bit_errors: int
    n_bits: int
    throughput_bps: float
    snr_db_used: float
    analytic_ber: float
    distance_m: float
    order: int


def _seed_list(seed: Seed) -> list[int]:
    return [int(seed)] if np.ndim(seed) == 0 else [int(s) for s in seed]


def run_scenario(cfg: ScenarioConfig) -> ScenarioResult:
    """Random bits through Gray PAM, pixel states, channel and detector.

    Work is done in blocks of ``CHUNK_SYMBOLS`` symbols; block ``i`` draws its
    noise from seed ``(*seed, 1, i)`` and the bits come from ``(*seed, 0)``.
    With a transition time constant the filter state is not carried across
    blocks, so each block restarts from the all-off level.
    """
    cfg.validate()
    seeds = _seed_list(cfg.seed)
    scheme, spp = cfg.scheme, int(cfg.samples_per_symbol)
    bits = np.random.default_rng([*seeds, 0]).integers(0, 2, size=int(cfg.n_bits))
    symbols = bits_to_symbols(bits, scheme)
    # full-array reflection received at unit amplitude
    peak = 1.0
    errors = 0
    snr_db = snr_at_distance(cfg.channel, cfg.distance_m)
    for i, start in enumerate(range(0, symbols.size, CHUNK_SYMBOLS)):
        block = symbols[start:start + CHUNK_SYMBOLS]
        wave = modulate(block, cfg.array, scheme, spp, cfg.transition_tau_s)
        rx = apply_channel(wave, cfg.channel, cfg.distance_m, peak, seed=[*seeds, 1, i])
        decided = detect(rx.samples, scheme, peak, spp)
        sent = bits[start * scheme.bits_per_symbol:(start + block.size) * scheme.bits_per_symbol]
        errors += int(np.count_nonzero(symbols_to_bits(decided, scheme) != sent))
    return ScenarioResult(
        measured_ber=errors / int(cfg.n_bits),
        bit_errors=errors,
        n_bits=int(cfg.n_bits),
        throughput_bps=scheme.bit_rate_bps,
        snr_db_used=snr_db,
        analytic_ber=float(ber_analytic_db(scheme.order, snr_db)),
        distance_m=float(cfg.distance_m),
        order=scheme.order,
    )


def array_for_order(template: PixelArray, order: int) -> PixelArray:
    """Smallest array of the template's kind that realises ``order`` levels."""
    if template.structure == BINARY_WEIGHTED:
        return PixelArray.binary_weighted(int(math.log2(order)), template.total_diameter_mm)
    return PixelArray.uniform(order - 1, template.total_diameter_mm)


@dataclass(frozen=True)
class SweepCell:
    distance_m: float
    order: int
    result: Optional[ScenarioResult] = None
    error: Optional[str] = None
    above_target: bool = False

    @property
    def ok(self) -> bool:
        return self.result is not None


def sweep(
    template: ScenarioConfig,
    distances: Sequence[float],
    orders: Sequence[int],
    target_ber: float = 1e-3,
    workers: int = 1,
) -> list[list[SweepCell]]:
    """Run every (distance, order) pair; rows follow distances, columns orders.

    Each cell uses a pixel array sized for its order (see
    :func:`array_for_order`), seed ``(*template.seed, row, column)``, and a bit
    count rounded down to a whole number of symbols. Cell failures are stored
    in the cell. Cells whose analytic BER exceeds ten times ``target_ber`` are
    flagged ``above_target``.
    """
    seeds = _seed_list(template.seed)

    def run_cell(row, col):
        d, M = distances[row], orders[col]
        try:
            scheme = replace(template.scheme, order=int(M))
            n_bits = template.n_bits - template.n_bits % scheme.bits_per_symbol
            cfg = replace(
                template,
                array=array_for_order(template.array, int(M)),
                scheme=scheme,
                distance_m=d,
                n_bits=n_bits,
                seed=(*seeds, row, col),
            )
            result = run_scenario(cfg)
        except (PixVlcError, ValueError) as exc:
            return SweepCell(d, int(M), error=str(exc))
        return SweepCell(d, int(M), result, above_target=result.analytic_ber > 10 * target_ber)

    if not orders:
        return []
    coords = [(r, c) for r in range(len(distances)) for c in range(len(orders))]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(lambda rc: run_cell(*rc), coords))
    else:
        flat = [run_cell(r, c) for r, c in coords]
    return [flat[r * len(orders):(r + 1) * len(orders)] for r in range(len(distances))]
