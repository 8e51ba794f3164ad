import re
import sys
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from delsym.channel import ChannelParam  # noqa: E402

_CRITERION = re.compile(r"test_acceptance\.py::test_ac(\d+)_")
_outcomes: dict[int, list[str]] = defaultdict(list)


@pytest.fixture
def half():
    return ChannelParam.bdc("1/2")


@pytest.fixture
def third():
    return ChannelParam.bdc("1/3")


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes[int(m.group(1))].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        results = _outcomes[number]
        verdict = "PASS" if all(r == "passed" for r in results) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  ({len(results)} checks)")
