import pytest

from nestsim import corpus


@pytest.fixture
def chain():
    return corpus.two_state_chain()


@pytest.fixture
def abloop():
    return corpus.ab_loop()


@pytest.fixture
def aloop():
    return corpus.a_loop()


@pytest.fixture
def abab():
    return corpus.ab_vs_ab_plus_a()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
