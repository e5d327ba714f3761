import pytest

from pixvlc.channel import ChannelModel, load_calibration_csv
from pixvlc.config import bundled_path

# criterion label -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def table3():
    return load_calibration_csv(bundled_path("table3_distance_snr.csv"))


@pytest.fixture(scope="session")
def table3_channel(table3):
    return ChannelModel.from_table(table3)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[label]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
