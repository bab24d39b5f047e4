import pytest

from cwlap import bessel

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(autouse=True)
def _memory_cache():
    """Keep tests off the default on-disk zero cache."""
    if bessel.zero_table().path is not None:
        bessel.configure_cache(None)
    yield


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
