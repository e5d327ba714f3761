"""Distance-aware choice of PAM order against a target bit-error rate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from pixvlc.ber import required_snr
from pixvlc.channel import ChannelModel, snr_at_distance
from pixvlc.modem import DEFAULT_SYMBOL_RATE_HZ, is_power_of_two


@dataclass(frozen=True)
class AdaptationPolicy:
    allowed_orders: tuple[int, ...] = (2, 4, 8)
    target_ber: float = 1e-3
    symbol_rate_hz: float = DEFAULT_SYMBOL_RATE_HZ

    def __post_init__(self):
        orders = tuple(int(m) for m in self.allowed_orders)
        object.__setattr__(self, "allowed_orders", orders)
        if not orders:
            raise ValueError("allowed_orders is empty")
        if any(not is_power_of_two(m) or m < 2 for m in orders):
            raise ValueError(f"orders must be powers of two >= 2, got {orders}")
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise ValueError("allowed_orders must be strictly ascending")
        if not 0 < self.target_ber < 0.5:
            raise ValueError("target_ber must lie in (0, 0.5)")
        if not self.symbol_rate_hz > 0:
            raise ValueError("symbol_rate_hz must be positive")


@dataclass(frozen=True)
class AdaptationDecision:
    """Outcome for one link.

    When no order is feasible ``chosen_M`` is None, throughput is 0 and
    ``margin_db`` is measured against the lowest allowed order (negative).
    """

    distance_m: Optional[float]
    snr_db: float
    chosen_M: Optional[int]
    throughput_bps: float
    margin_db: float


@lru_cache(maxsize=256)
def _threshold_db(M: int, target_ber: float) -> float:
    return required_snr(M, target_ber)


def select_modulation(
    snr_db: float, policy: AdaptationPolicy = AdaptationPolicy(), distance_m: Optional[float] = None
) -> AdaptationDecision:
    """Pick the highest allowed order whose required SNR is met (inclusive)."""
    chosen = None
    for M in policy.allowed_orders:
        if snr_db >= _threshold_db(M, policy.target_ber):
            chosen = M
    reference = chosen if chosen is not None else policy.allowed_orders[0]
    margin = snr_db - _threshold_db(reference, policy.target_ber)
    throughput = policy.symbol_rate_hz * math.log2(chosen) if chosen else 0.0
    return AdaptationDecision(distance_m, snr_db, chosen, throughput, margin)


def adaptation_table(
    model: ChannelModel, distances: Sequence[float], policy: AdaptationPolicy = AdaptationPolicy()
) -> list[AdaptationDecision]:
    return [select_modulation(snr_at_distance(model, d), policy, d) for d in distances]
