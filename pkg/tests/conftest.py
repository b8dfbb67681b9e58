import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_RESULTS = []


def record_acceptance(name, passed, detail=""):
    ACCEPTANCE_RESULTS.append((name, passed, detail))
    line = f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'}" + (f" — {detail}" if detail else "")
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        line = f"{name}: {'PASS' if passed else 'FAIL'}" + (f" — {detail}" if detail else "")
        terminalreporter.write_line(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "extended: long-running runs excluded from the default suite")


@pytest.fixture(scope="session")
def oracle_report():
    import oracle_suite
    return oracle_suite.run_oracle_comparison()
