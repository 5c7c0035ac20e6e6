import pytest

from qexplicit.zeros import ZeroCache, dirichlet, riemann_zeta

ACCEPTANCE_DS = (-3, -4, -7, -8, -11)


@pytest.fixture(scope="session")
def zero_cache(tmp_path_factory):
    """Zero lists for zeta and the five acceptance characters up to T=120."""
    cache = ZeroCache(tmp_path_factory.mktemp("zeros"))
    cache.get(riemann_zeta(), 120.0)
    for D in ACCEPTANCE_DS:
        cache.get(dirichlet(D), 120.0)
    return cache


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
