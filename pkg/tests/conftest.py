import pytest

from espeed.model import Instance, Job

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def unit_rigid():
    return Instance(m=1, energy=1.0, alpha=2.0, kind="rigid", jobs=(Job(0, 1.0, size=1),))


def rigid(m, energy, alpha, sizes, w=1.0):
    return Instance(m, energy, alpha, "rigid", tuple(Job(i, w * s, size=s) for i, s in enumerate(sizes)))


def dedicated(energy, alpha, fixes, works):
    jobs = tuple(Job(i, float(v), fix=tuple(f)) for i, (f, v) in enumerate(zip(fixes, works)))
    return Instance(2, energy, alpha, "dedicated", jobs)
