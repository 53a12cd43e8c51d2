import pytest

from polysemy import _backend


def pytest_addoption(parser):
    parser.addoption(
        "--kernel-backend",
        choices=("cython", "python"),
        help="force the kernel backend for the whole run",
    )


def pytest_configure(config):
    which = config.getoption("--kernel-backend")
    if which:
        _backend.set_backend(which)


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    """Run the test once per available kernel backend."""
    previous = _backend.active
    _backend.set_backend(request.param)
    yield request.param
    _backend.active = previous


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome; printed in the terminal summary."""

    def record(number, title, passed, detail=""):
        _CRITERIA.append((number, title, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_CRITERIA, key=lambda c: c[0]):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} -- {detail}")
