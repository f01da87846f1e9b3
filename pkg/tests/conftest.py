"""Shared fixtures and the acceptance-suite report.

Acceptance tests live in ``test_acceptance.py`` and are named
``test_criterion_<n>_<name>``; after the run one summary line per
criterion is printed in the form ``ACCEPTANCE <n> <name>: PASS|FAIL``.
"""

import re

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, derandomize=True)
settings.load_profile("suite")

_CRITERION = re.compile(r"test_criterion_(\d+)_([a-z_]+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    verdicts: dict[int, tuple[str, bool]] = {}
    for outcome, passed in (("passed", True), ("failed", False), ("error", False)):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            match = _CRITERION.search(nodeid)
            if not match:
                continue
            number, name = int(match.group(1)), match.group(2)
            prev_ok = verdicts.get(number, (name, True))[1]
            verdicts[number] = (name, prev_ok and passed)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        name, ok = verdicts[number]
        terminalreporter.write_line(
            f"ACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'}"
        )


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)
