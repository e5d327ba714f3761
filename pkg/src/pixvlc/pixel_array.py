"""Reflector pixel arrays: level counts, per-symbol on/off states and sizing.

Two layouts are supported. A *uniform* array has ``count`` identical pixels
and produces ``count + 1`` amplitude levels (all-off included). A
*binary-weighted* array has ``count`` clusters whose areas are in the ratio
1:2:4:..., producing ``2**count`` evenly spaced levels. In both cases the
pixels jointly occupy the area of one circular pixel of diameter
``total_diameter_mm``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pixvlc.errors import CapabilityError, LevelRangeError, StructureError

UNIFORM = "uniform"
BINARY_WEIGHTED = "binary_weighted"
STRUCTURES = (UNIFORM, BINARY_WEIGHTED)


@dataclass(frozen=True)
class PixelArray:
    """Geometry and weighting of a reflector pixel array.

    Parameters
    ----------
    structure : str
        ``"uniform"`` or ``"binary_weighted"``.
    count : int
        Number of pixels (uniform) or clusters (binary-weighted).
    total_diameter_mm : float
        Diameter of the single circular pixel whose area is conserved.
    """

    structure: str
    count: int
    total_diameter_mm: float = 20.0

    def __post_init__(self):
        if self.structure not in STRUCTURES:
            raise ValueError(f"unknown pixel structure {self.structure!r}")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"pixel count must be a positive integer, got {self.count}")
        if not self.total_diameter_mm > 0:
            raise ValueError("total_diameter_mm must be positive")

    @classmethod
    def uniform(cls, count: int, total_diameter_mm: float = 20.0) -> PixelArray:
        return cls(UNIFORM, count, total_diameter_mm)

    @classmethod
    def binary_weighted(cls, clusters: int, total_diameter_mm: float = 20.0) -> PixelArray:
        return cls(BINARY_WEIGHTED, clusters, total_diameter_mm)

    @property
    def weights(self) -> tuple[int, ...]:
        """Relative reflecting area of each pixel or cluster, smallest first."""
        if self.structure == BINARY_WEIGHTED:
            return tuple(2**k for k in range(self.count))
        return (1,) * self.count

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def __str__(self):
        name = "BinaryWeighted" if self.structure == BINARY_WEIGHTED else "Uniform"
        return f"{name}({self.count})"


@dataclass(frozen=True)
class PixelState:
    """On/off flag per pixel (uniform) or per cluster (binary-weighted)."""

    on_flags: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "on_flags", tuple(bool(f) for f in self.on_flags))

    def __len__(self):
        return len(self.on_flags)


def levels_available(array: PixelArray) -> int:
    """Number of distinct reflected amplitude levels the array can produce."""
    if array.structure == BINARY_WEIGHTED:
        return 2**array.count
    return array.count + 1


def symbol_to_state(array: PixelArray, symbol: int) -> PixelState:
    """Pixel state that reflects amplitude level ``symbol``.

    Binary-weighted cluster ``k`` (0-based) is on iff bit ``k`` of the symbol
    is set. Uniform arrays switch on the first ``symbol`` pixels.
    """
    limit = levels_available(array)
    if not 0 <= symbol < limit:
        raise LevelRangeError(f"symbol {symbol} outside 0..{limit - 1} for {array}")
    symbol = int(symbol)
    if array.structure == BINARY_WEIGHTED:
        return PixelState(tuple(bool((symbol >> k) & 1) for k in range(array.count)))
    return PixelState(tuple(k < symbol for k in range(array.count)))


def state_weight(array: PixelArray, state: PixelState) -> int:
    """Summed weight of the switched-on pixels."""
    if len(state) != array.count:
        raise StructureError(
            f"state has {len(state)} flags but {array} has {array.count} elements"
        )
    return sum(w for w, on in zip(array.weights, state.on_flags) if on)


def reflected_fraction(array: PixelArray, state: PixelState) -> float:
    """Fraction of the full-array reflection produced by ``state``."""
    return state_weight(array, state) / array.total_weight


def pixel_diameters(array: PixelArray) -> list[float]:
    """Diameter in mm of each pixel or cluster, ascending, conserving total area."""
    total = array.total_weight
    return [array.total_diameter_mm * math.sqrt(w / total) for w in array.weights]


def pixel_areas(array: PixelArray) -> list[float]:
    """Area in mm^2 of each pixel or cluster."""
    return [math.pi * (d / 2.0) ** 2 for d in pixel_diameters(array)]


def level_fractions(array: PixelArray, order: int) -> list[float]:
    """Reflected fraction for each of ``order`` evenly spaced symbols.

    Symbol ``s`` drives array level ``s * (L - 1) / (order - 1)`` where ``L``
    is the number of levels the array offers; that level must be an integer
    so the constellation stays evenly spaced.
    """
    levels = levels_available(array)
    if order < 2 or levels < order:
        raise CapabilityError(f"levels_available({levels}) < {order} for {array}")
    if (levels - 1) % (order - 1):
        raise CapabilityError(
            f"{array} offers {levels} levels, which cannot form {order} evenly spaced levels"
        )
    step = (levels - 1) // (order - 1)
    return [reflected_fraction(array, symbol_to_state(array, s * step)) for s in range(order)]

