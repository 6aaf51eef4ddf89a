import numpy as np
import pytest

# criterion number -> list of (part, passed, detail); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[num]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"{name} {'pass' if p else 'FAIL'} ({info})" for name, p, info in parts)
        tr.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
