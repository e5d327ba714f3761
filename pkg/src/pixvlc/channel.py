"""Distance-to-SNR calibration and the additive Gaussian noise channel.

SNR follows the peak-to-peak convention: the squared ratio of the received
signal swing to the noise swing, where the noise swing is taken as the
``+/- sigma`` band, i.e. ``SNR = (A_pp / (2 sigma))**2``. With midpoint
slicing this makes the symbol-level error probability of M-PAM equal to
``Q(sqrt(SNR) / (M - 1))`` per decision boundary, the argument used by
:func:`pixvlc.ber.ber_analytic`.

The SNR is referred to the detector, which averages ``samples_per_symbol``
samples per symbol, so the per-sample noise is scaled up by
``sqrt(samples_per_symbol)``.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from pixvlc.errors import DegenerateFitWarning, InsufficientDataError, LevelRangeError
from pixvlc.modem import Waveform

TABLE = "table"
POWER_LAW = "power_law"

SeedLike = Union[int, Sequence[int]]


@dataclass(frozen=True)
class PowerLawFit:
    c0_db: float
    gamma: float
    residuals_db: tuple[float, ...] = ()

    def predict(self, d):
        return self.c0_db - 10.0 * self.gamma * np.log10(d)


@dataclass(frozen=True)
class ChannelModel:
    """Distance-to-SNR mapping.

    ``mode="table"`` interpolates the calibration linearly in ``log10(d)``;
    ``mode="power_law"`` uses ``c0_db - 10 * gamma * log10(d)``.
    """

    calibration: tuple[tuple[float, float], ...] = ()
    mode: str = TABLE
    c0_db: Optional[float] = None
    gamma: Optional[float] = None
    residuals_db: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        cal = tuple((float(d), float(s)) for d, s in self.calibration)
        object.__setattr__(self, "calibration", cal)
        dists = [d for d, _ in cal]
        if any(d <= 0 for d in dists):
            raise ValueError("calibration distances must be positive")
        if any(b <= a for a, b in zip(dists, dists[1:])):
            raise ValueError("calibration distances must be strictly increasing")
        if self.mode == TABLE:
            if not cal:
                raise ValueError("table mode needs at least one calibration point")
        elif self.mode == POWER_LAW:
            if self.c0_db is None or self.gamma is None:
                raise ValueError("power_law mode needs c0_db and gamma")
            if not self.gamma > 0:
                raise ValueError(f"power-law gamma must be positive, got {self.gamma}")
        else:
            raise ValueError(f"unknown channel mode {self.mode!r}")

    @classmethod
    def from_table(cls, calibration) -> ChannelModel:
        return cls(tuple(calibration), TABLE)

    @classmethod
    def power_law(cls, c0_db: float, gamma: float, calibration=()) -> ChannelModel:
        return cls(tuple(calibration), POWER_LAW, c0_db, gamma)

    @classmethod
    def fitted(cls, calibration) -> ChannelModel:
        """Power-law model least-squares fitted to ``calibration``."""
        fit = fit_power_law(calibration)
        return cls(tuple(calibration), POWER_LAW, fit.c0_db, fit.gamma, fit.residuals_db)

    @property
    def distance_range(self) -> tuple[float, float]:
        return self.calibration[0][0], self.calibration[-1][0]


def snr_at_distance(model: ChannelModel, d: float) -> float:
    """SNR in dB at distance ``d`` metres."""
    if not d > 0:
        raise LevelRangeError(f"distance must be positive, got {d}")
    if model.mode == POWER_LAW:
        return float(model.c0_db - 10.0 * model.gamma * math.log10(d))
    lo, hi = model.distance_range
    if not lo <= d <= hi:
        raise LevelRangeError(
            f"distance {d} m outside calibrated range [{lo:g}, {hi:g}] m; "
            "use the power-law mode to extrapolate"
        )
    for dist, snr in model.calibration:
        if d == dist:
            return snr
    x = np.log10([p[0] for p in model.calibration])
    y = [p[1] for p in model.calibration]
    return float(np.interp(math.log10(d), x, y))


def fit_power_law(calibration) -> PowerLawFit:
    """Ordinary least squares of SNR (dB) on ``log10(distance)``."""
    pts = [(float(d), float(s)) for d, s in calibration]
    if len(pts) < 2:
        raise InsufficientDataError(f"need at least 2 calibration points, got {len(pts)}")
    x = np.log10([d for d, _ in pts])
    y = np.array([s for _, s in pts])
    if np.ptp(x) == 0:
        raise InsufficientDataError("calibration points share a single distance")
    design = np.column_stack([np.ones_like(x), -10.0 * x])
    (c0, gamma), *_ = np.linalg.lstsq(design, y, rcond=None)
    if abs(gamma) < 1e-12 * max(1.0, abs(c0)):
        warnings.warn("calibration SNR does not vary with distance", DegenerateFitWarning)
        gamma = 0.0
    residuals = y - (c0 - 10.0 * gamma * x)
    return PowerLawFit(float(c0), float(gamma), tuple(float(r) for r in residuals))


def noise_sigma(snr_db: float, peak_amplitude: float = 1.0, samples_per_symbol: int = 1) -> float:
    """Per-sample noise standard deviation for a detector-referred SNR."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    snr = 10.0 ** (snr_db / 10.0)
    return peak_amplitude / (2.0 * math.sqrt(snr)) * math.sqrt(samples_per_symbol)


@dataclass(frozen=True)
class Received:
    samples: np.ndarray
    sigma: float
    snr_db: float


def apply_channel(
    waveform: Waveform,
    model: ChannelModel,
    d: float,
    peak_amplitude: float = 1.0,
    seed: SeedLike = 0,
) -> Received:
    """Scale ``waveform`` to ``peak_amplitude`` and add white Gaussian noise.

    The noise level is constant (worst case, independent of the reflected
    level). ``seed`` may be an int or a sequence of ints and fully determines
    the noise.
    """
    if not peak_amplitude > 0:
        raise ValueError("peak_amplitude must be positive")
    snr_db = snr_at_distance(model, d)
    sigma = noise_sigma(snr_db, peak_amplitude, waveform.samples_per_symbol)
    clean = peak_amplitude * np.asarray(waveform.samples, dtype=float)
    if sigma == 0.0:
        return Received(clean, 0.0, snr_db)
    rng = np.random.default_rng(seed)
    return Received(clean + rng.normal(0.0, sigma, clean.shape), sigma, snr_db)


def load_calibration_csv(path: Union[str, Path]) -> list[tuple[float, float]]:
    """Read ``distance_m,snr_db`` pairs; extra columns are ignored."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"distance_m", "snr_db"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: header must contain distance_m,snr_db")
        rows = []
        for row in reader:
            try:
                rows.append((float(row["distance_m"]), float(row["snr_db"])))
            except (TypeError, ValueError):
                raise ValueError(f"{path}: line {reader.line_num}: malformed row {row}") from None
    if not rows:
        raise ValueError(f"{path}: no calibration rows")
    return rows


def write_calibration_csv(path: Union[str, Path], calibration) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["distance_m", "snr_db"])
        for d, s in calibration:
            writer.writerow([repr(float(d)), repr(float(s))])
