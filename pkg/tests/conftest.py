import sys

import pytest

from dnml.model import DndbInstance, Message, Narrative, RelationKind, RelationStore


def msg(chars, measures, pred=""):
    return Message(frozenset(chars), frozenset(measures), pred)


# hand-built twin of src/dnml/data/fixture.json
M = {
    1: msg({"women", "stroke"}, {"stroke risk rate"}, "higher than men"),
    2: msg({"women", "stroke"}, {"stroke share"}, "majority"),
    3: msg({"black women", "stroke"}, {"stroke prevalence"}, "higher-risk"),
    4: msg({"stroke"}, {"stroke deaths"}, "top cause of death"),
    5: msg({"pregnant", "preeclampsia"}, {"risk factor rate"}, "increases risk"),
    6: msg({"black women", "white women"}, {"stroke deaths"}, "compares"),
    7: msg({"black women", "white women", "stroke"}, {"first-time stroke rate"}, "compares"),
    8: msg({"pregnant", "birth control pills"}, {"risk factor rate"}, "increases risk"),
    9: msg({"europe", "covid"}, {"covid deaths"}, "declining"),
}

N1 = (M[1], M[2], M[3], M[4], M[5])
N2 = (M[6], M[7], M[8])
N3 = (M[9],)

STORE = RelationStore({
    RelationKind.SPECIALIZATION: [("black women", "women"), ("white women", "women")],
    RelationKind.SPATIAL: [("Greece", "France")],
    RelationKind.TEMPORAL: [("Spring", "2nd quarter")],
    RelationKind.SIMILARITY: [("birth control pills", "abortion pills")],
})


def inst(*tuples):
    return DndbInstance(Narrative.of(f"t{i}", t) for i, t in enumerate(tuples, start=1))


@pytest.fixture
def m():
    return M


@pytest.fixture
def fixture_instance():
    return DndbInstance([Narrative.of("n1", N1), Narrative.of("n2", N2), Narrative.of("n3", N3)])


@pytest.fixture
def store():
    return STORE


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[number])
