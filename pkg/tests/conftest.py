from __future__ import annotations

import numpy as np
import pytest

# acceptance results gathered by tests/test_acceptance.py, echoed in the summary
ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, desc = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {desc}")
