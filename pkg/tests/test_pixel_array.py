import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pixvlc.errors import CapabilityError, LevelRangeError, StructureError
from pixvlc.pixel_array import (
    PixelArray,
    PixelState,
    level_fractions,
    levels_available,
    pixel_areas,
    pixel_diameters,
    reflected_fraction,
    state_weight,
    symbol_to_state,
)

BW = PixelArray.binary_weighted
UNI = PixelArray.uniform

arrays = st.one_of(
    st.builds(BW, st.integers(1, 12), st.floats(0.1, 500.0)),
    st.builds(UNI, st.integers(1, 64), st.floats(0.1, 500.0)),
)


def distinct_on_counts(n):
    # oracle: enumerate every subset of n identical pixels
    return len({bin(mask).count("1") for mask in range(2**n)})


class TestLevels:
    @pytest.mark.parametrize("n, expected", [(3, 8), (1, 2), (5, 32)])
    def test_binary_weighted(self, n, expected):
        assert levels_available(BW(n)) == expected

    @pytest.mark.parametrize("n", [1, 2, 3, 6])
    def test_uniform_matches_enumeration(self, n):
        assert levels_available(UNI(n)) == distinct_on_counts(n)

    def test_uniform3(self):
        assert levels_available(UNI(3)) == 4


class TestSymbolToState:
    def test_examples(self):
        assert symbol_to_state(BW(3), 5).on_flags == (True, False, True)
        assert symbol_to_state(BW(3), 0).on_flags == (False, False, False)
        assert symbol_to_state(UNI(3), 2).on_flags == (True, True, False)

    @pytest.mark.parametrize("symbol", [-1, 8, 100])
    def test_out_of_range_names_limit(self, symbol):
        with pytest.raises(LevelRangeError, match="0..7"):
            symbol_to_state(BW(3), symbol)


class TestReflectedFraction:
    def test_examples(self):
        assert reflected_fraction(BW(3), PixelState((True,) * 3)) == 1.0
        assert reflected_fraction(BW(3), symbol_to_state(BW(3), 5)) == 5 / 7
        assert reflected_fraction(UNI(4), PixelState((True, False, True, False))) == 0.5

    def test_length_mismatch(self):
        with pytest.raises(StructureError):
            reflected_fraction(BW(3), PixelState((True, False)))


class TestDiameters:
    def test_two_clusters(self):
        small, large = pixel_diameters(BW(2, 20.0))
        assert small == pytest.approx(11.55, abs=0.01)
        assert large == pytest.approx(16.33, abs=0.01)

    def test_single_pixel(self):
        assert pixel_diameters(BW(1, 20.0)) == [20.0]

    def test_three_clusters(self):
        ds = pixel_diameters(BW(3, 20.0))
        assert ds == pytest.approx([7.56, 10.69, 15.12], abs=0.01)
        assert sum(math.pi * (d / 2) ** 2 for d in ds) == pytest.approx(math.pi * 100, rel=1e-12)

    def test_uniform(self):
        assert pixel_diameters(UNI(4, 20.0)) == pytest.approx([10.0] * 4)


class TestLevelFractions:
    def test_oversized_array_spans_full_range(self):
        assert level_fractions(BW(3), 2) == [0.0, 1.0]
        assert level_fractions(UNI(3), 4) == pytest.approx([0, 1 / 3, 2 / 3, 1])

    def test_too_coarse(self):
        with pytest.raises(CapabilityError, match=r"levels_available\(2\) < 8"):
            level_fractions(BW(1), 8)

    def test_uneven(self):
        with pytest.raises(CapabilityError):
            level_fractions(BW(3), 4)


@settings(max_examples=1000, deadline=None)
@given(arrays)
def test_area_conservation(array):
    reference = math.pi * (array.total_diameter_mm / 2) ** 2
    assert abs(sum(pixel_areas(array)) - reference) <= 1e-9 * reference


@settings(max_examples=1000, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))))
def test_level_linearity_and_round_trip(case):
    n, s = case
    array = BW(n)
    state = symbol_to_state(array, s)
    assert reflected_fraction(array, state) == s / (levels_available(array) - 1)
    assert state_weight(array, state) == s


@settings(max_examples=200, deadline=None)
@given(arrays)
def test_monotone_in_symbol(array):
    fracs = [
        reflected_fraction(array, symbol_to_state(array, s))
        for s in range(min(levels_available(array), 256))
    ]
    assert all(b > a for a, b in zip(fracs, fracs[1:]))
