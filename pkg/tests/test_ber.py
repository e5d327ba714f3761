import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from pixvlc.ber import (
    ber_analytic,
    ber_analytic_db,
    estimate_ber_monte_carlo,
    q_function,
    required_snr,
    zero_snr_ber,
)
from pixvlc.modem import gray_encode
from pixvlc.errors import DomainError

mpmath.mp.dps = 40


def q_reference(x):
    return float(mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2)


def mp_tail(x):
    return mpmath.erfc(mpmath.mpf(x) / mpmath.sqrt(2)) / 2


def normal_tail_quad(x):
    value, _ = quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), x, math.inf)
    return value


def exact_gray_pam_ber(M, snr_db):
    """Exact BER of Gray M-PAM with midpoint slicing, summed over all transitions."""
    sigma = 1.0 / (2.0 * math.sqrt(10 ** (snr_db / 10)))
    levels = np.arange(M) / (M - 1)
    edges = np.concatenate([[-np.inf], (levels[:-1] + levels[1:]) / 2, [np.inf]])
    labels = gray_encode(np.arange(M))
    total = mpmath.mpf(0)
    for i in range(M):
        for j in range(M):
            if i == j:
                continue
            lo, hi = (edges[j] - levels[i]) / sigma, (edges[j + 1] - levels[i]) / sigma
            p = mp_tail(lo) - mp_tail(hi)
            total += p * bin(int(labels[i] ^ labels[j])).count("1")
    return float(total / (M * math.log2(M)))


MC_SYMBOLS = 400_000


def _grid(limit):
    # cells with >= 100 expected errors; the closed form only where BER <= 1e-2
    cells = []
    for M in (2, 4, 8):
        for snr_db in np.arange(0.0, 30.0, 2.0):
            ber = float(ber_analytic_db(M, snr_db))
            if ber * MC_SYMBOLS * math.log2(M) >= 100 and ber <= limit:
                cells.append((M, float(snr_db)))
    return cells


EXACT_GRID = _grid(1.0)
ANALYTIC_GRID = _grid(1e-2)


class TestQFunction:
    def test_zero(self):
        assert q_function(0.0) == 0.5

    def test_quadrature_anchor(self):
        assert q_function(3.0902) == pytest.approx(1.000e-3, abs=1e-6)
        assert q_function(3.0902) == pytest.approx(normal_tail_quad(3.0902), abs=1e-12)

    @pytest.mark.parametrize("x", np.linspace(-8, 8, 161))
    def test_against_high_precision(self, x):
        assert abs(q_function(x) - q_reference(x)) <= 1e-12

    @settings(max_examples=300, deadline=None)
    @given(st.floats(-30, 30))
    def test_reflection(self, x):
        assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-15)

    def test_vectorised(self):
        assert q_function(np.array([0.0, 0.0])).tolist() == [0.5, 0.5]


class TestAnalytic:
    def test_ook_anchor(self):
        assert ber_analytic(2, 10**0.980) == pytest.approx(1e-3, rel=0.02)

    def test_zero_snr(self):
        assert ber_analytic(2, 0.0) == 0.5

    def test_8pam_anchor(self):
        assert ber_analytic(8, 10**2.623) == pytest.approx(1e-3, rel=0.02)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(0, 1e6))
    def test_ook_is_q(self, s):
        assert ber_analytic(2, s) == q_function(math.sqrt(s))

    # capped at 30 dB: beyond that the OOK curve underflows double precision
    @settings(max_examples=1000, deadline=None)
    @given(st.sampled_from([2, 4, 8, 16]), st.floats(-10, 25), st.floats(0.01, 5))
    def test_strictly_decreasing_in_snr(self, M, snr_db, delta):
        assert ber_analytic_db(M, snr_db + delta) < ber_analytic_db(M, snr_db)

    # below ~2.3 dB the shrinking prefactor lets 8-PAM dip under 4-PAM
    @settings(max_examples=300, deadline=None)
    @given(st.floats(2.5, 30))
    def test_increasing_in_order(self, snr_db):
        values = [ber_analytic_db(M, snr_db) for M in (2, 4, 8)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_negative_snr_rejected(self):
        with pytest.raises(ValueError):
            ber_analytic(2, -1.0)


class TestRequiredSnr:
    @pytest.mark.parametrize("M, expected", [(2, 9.80), (4, 19.10), (8, 26.23)])
    def test_table4(self, M, expected):
        assert required_snr(M, 1e-3) == pytest.approx(expected, abs=0.05)

    @settings(max_examples=300, deadline=None)
    @given(st.sampled_from([2, 4, 8, 16, 64]), st.floats(1e-12, 0.99))
    def test_round_trip(self, M, fraction):
        target = fraction * zero_snr_ber(M)
        snr = required_snr(M, target)
        assert abs(ber_analytic_db(M, snr) - target) / target <= 1e-6
        assert ber_analytic_db(M, snr) <= target

    def test_bracket_widens_low(self):
        # needs SNR below the -20 dB starting bracket
        target = ber_analytic_db(2, -30.0)
        assert required_snr(2, target) == pytest.approx(-30.0, abs=1e-6)

    def test_bracket_widens_high(self):
        snr = required_snr(1024, 1e-3)
        assert snr > 60.0
        assert ber_analytic_db(1024, snr) == pytest.approx(1e-3, rel=1e-6)

    @pytest.mark.parametrize("target", [0.0, 0.5, 0.6, -1e-3])
    def test_domain(self, target):
        with pytest.raises(DomainError):
            required_snr(2, target)

    def test_domain_for_higher_order(self):
        # zero-SNR BER of 8-PAM is 7/24
        with pytest.raises(DomainError):
            required_snr(8, 0.3)


class TestMonteCarlo:
    def test_high_snr_no_errors(self):
        rep = estimate_ber_monte_carlo(2, 60.0, 10**5, seed=4)
        assert rep.bit_errors == 0
        assert rep.ber_monte_carlo == 0.0

    def test_report_bookkeeping(self):
        rep = estimate_ber_monte_carlo(4, 12.0, 10**5, seed=2)
        assert rep.ber_monte_carlo == rep.bit_errors / (rep.symbols_simulated * 2)
        p, n = rep.ber_monte_carlo, 2 * 10**5
        assert rep.ci95_halfwidth == pytest.approx(1.96 * math.sqrt(p * (1 - p) / n))

    def test_deterministic(self):
        a = estimate_ber_monte_carlo(8, 20.0, 50_000, seed=9)
        b = estimate_ber_monte_carlo(8, 20.0, 50_000, seed=9)
        assert a == b

    def test_chunked_parallel_matches_sequential(self):
        seq = estimate_ber_monte_carlo(4, 15.0, 200_000, seed=3, chunk_symbols=30_000)
        par = estimate_ber_monte_carlo(4, 15.0, 200_000, seed=3, chunk_symbols=30_000, workers=4)
        assert seq == par

    @pytest.mark.parametrize("M, snr_db", EXACT_GRID)
    def test_agrees_with_exact_oracle(self, M, snr_db):
        rep = estimate_ber_monte_carlo(M, snr_db, MC_SYMBOLS, seed=M * 100 + int(snr_db))
        n_bits = MC_SYMBOLS * int(math.log2(M))
        expected = exact_gray_pam_ber(M, snr_db)
        sd = math.sqrt(expected * (1 - expected) / n_bits)
        assert abs(rep.ber_monte_carlo - expected) <= 3 * sd

    @pytest.mark.parametrize("M, snr_db", ANALYTIC_GRID)
    def test_agrees_with_analytic(self, M, snr_db):
        rep = estimate_ber_monte_carlo(M, snr_db, MC_SYMBOLS, seed=M * 1000 + int(snr_db))
        n_bits = MC_SYMBOLS * int(math.log2(M))
        expected = rep.ber_analytic
        sd = math.sqrt(expected * (1 - expected) / n_bits)
        assert abs(rep.ber_monte_carlo - expected) <= 3 * sd

    @pytest.mark.parametrize("M, snr_db", [(2, 9.0), (4, 18.0), (8, 25.0)])
    def test_closed_form_gap_small_at_low_ber(self, M, snr_db):
        exact = exact_gray_pam_ber(M, snr_db)
        assert abs(float(ber_analytic_db(M, snr_db)) - exact) / exact < 0.02

    @pytest.mark.slow
    @pytest.mark.parametrize("M, snr_db", [(2, 9.80), (4, 19.10)])
    def test_paper_anchors(self, M, snr_db):
        rep = estimate_ber_monte_carlo(M, snr_db, 10**7, seed=7)
        assert rep.ber_monte_carlo == pytest.approx(1e-3, rel=0.10)
