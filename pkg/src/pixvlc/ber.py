"""Bit-error rate of Gray-coded M-PAM: closed form, inversion and Monte Carlo."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import erfc

from pixvlc.errors import DomainError
from pixvlc.modem import gray_encode, is_power_of_two, slice_levels

DEFAULT_CHUNK_SYMBOLS = 1_000_000
BRACKET_DB = (-20.0, 60.0)


@dataclass(frozen=True)
class BerReport:
    ber_analytic: float
    ber_monte_carlo: Optional[float]
    symbols_simulated: int
    bit_errors: int
    ci95_halfwidth: float
    order: int = 2
    snr_db: float = float("nan")


def q_function(x):
    """Gaussian tail probability ``P(Z > x)``; accepts scalars or arrays."""
    out = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


def _check_order(M):
    if not is_power_of_two(M) or M < 2:
        raise ValueError(f"PAM order must be a power of two >= 2, got {M}")


def ber_analytic(M: int, snr_linear) -> float:
    """Gray-coded M-PAM bit-error rate at a peak-to-peak SNR (linear).

    ``2(M-1) / (M log2 M) * Q(sqrt(snr) / (M-1))``.
    """
    _check_order(M)
    snr = np.asarray(snr_linear, dtype=float)
    if np.any(snr < 0):
        raise ValueError("snr_linear must be non-negative")
    coeff = 2.0 * (M - 1) / (M * math.log2(M))
    return coeff * q_function(np.sqrt(snr) / (M - 1))


def ber_analytic_db(M: int, snr_db):
    return ber_analytic(M, 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0))


def zero_snr_ber(M: int) -> float:
    return (M - 1) / (M * math.log2(M))


def required_snr(M: int, target_ber: float, tol_db: float = 1e-10) -> float:
    """SNR in dB at which :func:`ber_analytic` equals ``target_ber``.

    Bisection on the monotone BER curve in the dB domain. The starting
    bracket of -20..60 dB is widened in 20 dB steps until it straddles the
    target.
    """
    _check_order(M)
    ceiling = zero_snr_ber(M)
    if not 0.0 < target_ber < ceiling:
        raise DomainError(
            f"target BER {target_ber} outside (0, {ceiling:.6g}) for M={M}"
        )

    def excess(snr_db):
        return ber_analytic_db(M, snr_db) - target_ber

    lo, hi = BRACKET_DB
    while excess(lo) <= 0:
        lo -= 20.0
    while excess(hi) >= 0:
        hi += 20.0
        if hi > 400.0:
            raise DomainError(f"target BER {target_ber} too small to resolve")
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    # upper end: BER there is guaranteed not to exceed the target
    return hi


def _bit_popcount(x):
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x = x >> 1
    return count


def _mc_chunk(M, sigma, n, seed, chunk_index):
    rng = np.random.default_rng([seed, chunk_index])
    symbols = rng.integers(0, M, size=n)
    rx = symbols / (M - 1) + rng.normal(0.0, sigma, size=n)
    decided = slice_levels(rx, M)
    wrong = decided != symbols
    diff = gray_encode(symbols[wrong]) ^ gray_encode(decided[wrong])
    return int(_bit_popcount(diff).sum())


def estimate_ber_monte_carlo(
    M: int,
    snr_db: float,
    n_symbols: int,
    seed: int = 0,
    chunk_symbols: int = DEFAULT_CHUNK_SYMBOLS,
    workers: int = 1,
) -> BerReport:
    """Simulate Gray-coded M-PAM over Gaussian noise and count bit errors.

    Levels ``k/(M-1)`` span a unit peak-to-peak swing; the noise standard
    deviation is ``1 / (2 sqrt(SNR))``. Symbols are drawn in chunks of
    ``chunk_symbols``, chunk ``i`` seeded by ``(seed, i)``, so the result for
    a given seed and chunk size is identical for any number of ``workers``.
    """
    _check_order(M)
    if n_symbols < 1:
        raise ValueError("n_symbols must be at least 1")
    if chunk_symbols < 1:
        raise ValueError("chunk_symbols must be at least 1")
    sigma = 1.0 / (2.0 * math.sqrt(10.0 ** (snr_db / 10.0)))
    sizes = [chunk_symbols] * (n_symbols // chunk_symbols)
    if n_symbols % chunk_symbols:
        sizes.append(n_symbols % chunk_symbols)
    jobs = [(M, sigma, n, seed, i) for i, n in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda job: _mc_chunk(*job), jobs))
    else:
        counts = [_mc_chunk(*job) for job in jobs]
    bit_errors = sum(counts)
    n_bits = n_symbols * int(math.log2(M))
    p = bit_errors / n_bits
    return BerReport(
        ber_analytic=float(ber_analytic_db(M, snr_db)),
        ber_monte_carlo=p,
        symbols_simulated=n_symbols,
        bit_errors=bit_errors,
        ci95_halfwidth=1.96 * math.sqrt(p * (1.0 - p) / n_bits),
        order=M,
        snr_db=snr_db,
    )
