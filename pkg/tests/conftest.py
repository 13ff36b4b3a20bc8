from pathlib import Path

import pytest

ACCEPTANCE_LINES = {}
ARTIFACT_DIR = Path(__file__).resolve().parent.parent / "acceptance_artifacts"


@pytest.fixture
def record_criterion():
    """Store a one-line PASS/FAIL verdict for the terminal summary."""

    def record(number, ok, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        return ok

    return record


@pytest.fixture(scope="session")
def artifact_dir():
    ARTIFACT_DIR.mkdir(exist_ok=True)
    return ARTIFACT_DIR


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
