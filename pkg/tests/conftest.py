import pytest

from nervekit import Atlas, Measure, SemanticSpace, new_state

ACCEPTANCE_RESULTS = []


@pytest.fixture
def space3():
    return SemanticSpace(["1", "2", "3"])


@pytest.fixture
def atlas3(space3):
    return Atlas.from_labels(space3, {"p": ["1", "2"], "q": ["2", "3"]})


@pytest.fixture
def mu3(space3):
    return Measure(space3, [0.2, 0.5, 0.3])


@pytest.fixture
def dialogue():
    """The running three-utterance example: p, q, !p over worlds 1..3."""
    state = new_state(["1", "2", "3"], {"p": ["1", "2"], "q": ["2", "3"]}, {"1": 0.2, "2": 0.5, "3": 0.3})
    for text in ("p", "q", "!p"):
        state.assert_utterance(text)
    return state


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
