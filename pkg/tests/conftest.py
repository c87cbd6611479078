from pathlib import Path

import pytest

from qnet import corpus

NETWORKS = Path(__file__).resolve().parent.parent / "networks"


@pytest.fixture(scope="session")
def networks_dir():
    return NETWORKS


@pytest.fixture(scope="session")
def canonical_corpus():
    return corpus.corpus("canonical", 200, seed=1)


@pytest.fixture(scope="session")
def two_corpus():
    return corpus.corpus("two", 100, seed=2)


@pytest.fixture(scope="session")
def k_corpus():
    return corpus.corpus("k", 50, seed=3)


@pytest.fixture(scope="session")
def mixed_corpus():
    return corpus.corpus("mixed", 100, seed=4)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Record one verdict line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number, ok, text):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
