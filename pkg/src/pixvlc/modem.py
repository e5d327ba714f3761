"""Gray-coded M-PAM mapping, waveform generation and threshold detection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from pixvlc.errors import FramingError, LevelRangeError
from pixvlc.pixel_array import PixelArray, level_fractions

DEFAULT_SYMBOL_RATE_HZ = 200.0
DEFAULT_SAMPLES_PER_SYMBOL = 50


@dataclass(frozen=True)
class ModulationScheme:
    """PAM order and symbol timing.

    ``response_time_s``, when given, caps the symbol rate at its reciprocal
    (the shutter must settle within one symbol).
    """

    order: int
    symbol_rate_hz: float = DEFAULT_SYMBOL_RATE_HZ
    response_time_s: Optional[float] = None

    def __post_init__(self):
        if not is_power_of_two(self.order) or self.order < 2:
            raise ValueError(f"PAM order must be a power of two >= 2, got {self.order}")
        if not self.symbol_rate_hz > 0:
            raise ValueError("symbol_rate_hz must be positive")
        if self.response_time_s is not None:
            if not self.response_time_s > 0:
                raise ValueError("response_time_s must be positive")
            if self.symbol_rate_hz > 1.0 / self.response_time_s * (1 + 1e-12):
                raise ValueError(
                    f"symbol rate {self.symbol_rate_hz} Hz exceeds 1/response_time "
                    f"= {1.0 / self.response_time_s:g} Hz"
                )

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    @property
    def bit_rate_bps(self) -> float:
        return self.symbol_rate_hz * self.bits_per_symbol


@dataclass(frozen=True)
class Waveform:
    """Normalised reflected amplitude, sampled uniformly."""

    samples: np.ndarray
    sample_rate_hz: float
    samples_per_symbol: int

    @property
    def n_symbols(self) -> int:
        return len(self.samples) // self.samples_per_symbol


def is_power_of_two(n) -> bool:
    return int(n) == n and n > 0 and (int(n) & (int(n) - 1)) == 0


def gray_encode(values):
    values = np.asarray(values, dtype=np.int64)
    return values ^ (values >> 1)


def gray_decode(codes):
    codes = np.asarray(codes, dtype=np.int64)
    out = codes.copy()
    shift = codes >> 1
    while np.any(shift):
        out ^= shift
        shift >>= 1
    return out


def bits_to_symbols(bits: Sequence[int], scheme: ModulationScheme) -> np.ndarray:
    """Map MSB-first groups of ``log2(M)`` bits to PAM levels via Gray code.

    >>> bits_to_symbols([1, 1], ModulationScheme(4)).tolist()
    [2]
    """
    bits = np.asarray(bits, dtype=np.int64).ravel()
    k = scheme.bits_per_symbol
    if bits.size % k:
        raise FramingError(f"{bits.size} bits do not divide into {k}-bit symbols")
    if bits.size and (bits.min() < 0 or bits.max() > 1):
        raise ValueError("bits must be 0 or 1")
    groups = bits.reshape(-1, k)
    weights = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)
    return gray_decode(groups @ weights)


def symbols_to_bits(symbols: Sequence[int], scheme: ModulationScheme) -> np.ndarray:
    """Inverse of :func:`bits_to_symbols`."""
    symbols = np.asarray(symbols, dtype=np.int64).ravel()
    if symbols.size and (symbols.min() < 0 or symbols.max() >= scheme.order):
        raise LevelRangeError(f"symbols must lie in 0..{scheme.order - 1}")
    k = scheme.bits_per_symbol
    codes = gray_encode(symbols)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).ravel()


def modulate(
    symbols: Sequence[int],
    array: PixelArray,
    scheme: ModulationScheme,
    samples_per_symbol: int = DEFAULT_SAMPLES_PER_SYMBOL,
    transition_tau_s: Optional[float] = None,
) -> Waveform:
    """Hold each symbol's reflected fraction for ``samples_per_symbol`` samples.

    With ``transition_tau_s`` set, the amplitude follows a first-order
    (RC) approach towards each new level instead of stepping, starting from
    the all-off state. Sample ``i`` of a symbol is taken at the end of its
    sample period, so a unit step with tau equal to one period gives
    ``1 - exp(-1)`` on the first sample after the edge.
    """
    if samples_per_symbol < 1 or int(samples_per_symbol) != samples_per_symbol:
        raise ValueError("samples_per_symbol must be a positive integer")
    symbols = np.asarray(symbols, dtype=np.int64).ravel()
    if symbols.size and (symbols.min() < 0 or symbols.max() >= scheme.order):
        raise LevelRangeError(f"symbols must lie in 0..{scheme.order - 1}")
    table = np.asarray(level_fractions(array, scheme.order))
    samples = np.repeat(table[symbols], samples_per_symbol)
    fs = scheme.symbol_rate_hz * samples_per_symbol
    if transition_tau_s is not None:
        if not transition_tau_s > 0:
            raise ValueError("transition_tau_s must be positive")
        alpha = 1.0 - math.exp(-1.0 / (fs * transition_tau_s))
        samples = lfilter([alpha], [1.0, alpha - 1.0], samples)
        np.clip(samples, 0.0, 1.0, out=samples)
    return Waveform(samples, fs, int(samples_per_symbol))


def detect(
    received,
    scheme: ModulationScheme,
    reference_amplitude: float,
    samples_per_symbol: int = DEFAULT_SAMPLES_PER_SYMBOL,
) -> np.ndarray:
    """Average each symbol's samples and slice to the nearest PAM level.

    Levels are ``k / (M - 1)`` of ``reference_amplitude``; a value exactly on
    a midpoint goes to the lower level.
    """
    if not reference_amplitude > 0:
        raise ValueError("reference_amplitude must be positive")
    received = np.asarray(received, dtype=float).ravel()
    if received.size % samples_per_symbol:
        raise FramingError(
            f"{received.size} samples do not divide into symbols of {samples_per_symbol}"
        )
    means = received.reshape(-1, samples_per_symbol).mean(axis=1)
    return slice_levels(means / reference_amplitude, scheme.order)


def slice_levels(normalized, order: int) -> np.ndarray:
    """Nearest of ``order`` levels on [0, 1], midpoints rounding down."""
    scaled = np.asarray(normalized, dtype=float) * (order - 1)
    return np.clip(np.ceil(scaled - 0.5), 0, order - 1).astype(np.int64)
