from contextlib import contextmanager

import pytest

from diffconcepts.encoder import context_of, encode, preprocess
from diffconcepts.sensor import parse_series_csv

from goldens import WORKED_SERIES_CSV


@pytest.fixture(scope="session")
def worked():
    return parse_series_csv(WORKED_SERIES_CSV, name="worked")


@pytest.fixture(scope="session")
def unit_context(worked):
    return context_of(preprocess(worked, ["a", "w"], eps=0))


@pytest.fixture(scope="session")
def final_context(worked):
    return encode(worked, ["a", "w"], eps=0)


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(capsys):
    """``with criterion(n, title):`` records and prints one PASS/FAIL line."""

    @contextmanager
    def check(number, title):
        notes = []
        ok = False
        try:
            yield notes
            ok = True
        finally:
            detail = f" ({'; '.join(notes)})" if notes else ""
            line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}{detail}"
            ACCEPTANCE[number] = line
            with capsys.disabled():
                print("\n" + line)

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
