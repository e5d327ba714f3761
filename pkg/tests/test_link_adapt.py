import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pixvlc.ber import ber_analytic_db, required_snr
from pixvlc.channel import ChannelModel
from pixvlc.errors import LevelRangeError
from pixvlc.link_adapt import AdaptationPolicy, adaptation_table, select_modulation

POLICY = AdaptationPolicy()


class TestSelect:
    @pytest.mark.parametrize(
        "snr, order, bps",
        [(26.55, 8, 600.0), (21.15, 4, 400.0), (18.80, 2, 200.0), (14.98, 2, 200.0)],
    )
    def test_table3_points(self, snr, order, bps):
        decision = select_modulation(snr, POLICY)
        assert decision.chosen_M == order
        assert decision.throughput_bps == bps
        assert decision.margin_db >= 0

    def test_infeasible(self):
        decision = select_modulation(5.0, POLICY)
        assert decision.chosen_M is None
        assert decision.throughput_bps == 0.0
        assert decision.margin_db == pytest.approx(5.0 - required_snr(2, 1e-3))

    @pytest.mark.parametrize("M", [2, 4, 8])
    def test_threshold_inclusive(self, M):
        decision = select_modulation(required_snr(M, 1e-3), POLICY)
        assert decision.chosen_M == M
        assert decision.margin_db == 0.0

    def test_custom_policy(self):
        policy = AdaptationPolicy((2, 4), 1e-3, 100.0)
        assert select_modulation(30.0, policy).throughput_bps == 200.0

    @pytest.mark.parametrize(
        "kwargs",
        [dict(allowed_orders=(4, 2)), dict(allowed_orders=(3,)), dict(target_ber=0.5), dict(allowed_orders=())],
    )
    def test_policy_validation(self, kwargs):
        with pytest.raises(ValueError):
            AdaptationPolicy(**kwargs)


@settings(max_examples=500, deadline=None)
@given(st.floats(-10, 60))
def test_achieved_ber_guarantee(snr):
    decision = select_modulation(snr, POLICY)
    if decision.chosen_M is not None:
        assert ber_analytic_db(decision.chosen_M, snr) <= POLICY.target_ber
        assert decision.throughput_bps == POLICY.symbol_rate_hz * math.log2(decision.chosen_M)


class TestTable:
    def test_paper_distances(self, table3_channel):
        out = adaptation_table(table3_channel, [2, 3, 4, 5])
        assert [d.chosen_M for d in out] == [8, 4, 2, 2]
        assert [d.throughput_bps for d in out] == [600, 400, 200, 200]
        assert [d.distance_m for d in out] == [2, 3, 4, 5]

    def test_composition(self, table3_channel):
        assert adaptation_table(table3_channel, [3])[0].chosen_M == select_modulation(21.15).chosen_M

    def test_empty(self, table3_channel):
        assert adaptation_table(table3_channel, []) == []

    def test_range_error(self, table3_channel):
        with pytest.raises(LevelRangeError):
            adaptation_table(table3_channel, [2, 7])

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.floats(0.5, 30.0), min_size=1, max_size=20))
    def test_monotone_degradation(self, distances):
        model = ChannelModel.power_law(34.93, 2.8)
        out = adaptation_table(model, sorted(distances))
        orders = [d.chosen_M or 0 for d in out]
        assert all(b <= a for a, b in zip(orders, orders[1:]))
