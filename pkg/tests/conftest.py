import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from threshold_lab.family import GroundSet, SetFamily  # noqa: E402
from threshold_lab.forge import paper_example  # noqa: E402


@pytest.fixture(scope="session")
def worked():
    return paper_example()


@pytest.fixture
def abc():
    return GroundSet(("a", "b", "c"))


def fam(ground, *sets):
    """Shorthand: fam(X, "a", "c", "ac", "") with one letter per label."""
    return SetFamily.from_labels(ground, [list(s) for s in sets])


ACCEPTANCE: dict[int, str] = {}


def record(number: int, title: str, ok: bool, detail: str) -> str:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    ACCEPTANCE[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
