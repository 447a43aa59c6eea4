import pytest

from qgauss import gauss
from qgauss.qgroup import preset


@pytest.fixture(scope="session")
def factors():
    """Gauss factors per preset, computed once per session."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = gauss.decompose(preset(name))
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
