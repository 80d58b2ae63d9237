import numpy as np
import pytest

from spinwire import ChainParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def reference_params():
    return ChainParams.uniform(150, j_coupling=1.0, d_coupling=14.455, b_field=500.0, alpha=1.0)


# acceptance criteria register (name, passed, detail) here; printed after the run
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
