import mpmath as mp
import pytest

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(autouse=True)
def _mp_precision():
    with mp.workdps(30):
        yield


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
