from pathlib import Path

import pytest

from stlf.synthetic import REFERENCE_LAW, generate_series

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# (criterion number, description, passed) collected by test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, ok in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {text}")


@pytest.fixture
def law():
    return REFERENCE_LAW


@pytest.fixture
def clean_series():
    return generate_series(120, seed=11)


@pytest.fixture
def sample_csv():
    return DATA_DIR / "sample_series.csv"
