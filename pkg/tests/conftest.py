import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from netsup import Event, EventTable, Tdes, load_model  # noqa: E402

# random plants with untimed controllable cycles give networked plants whose
# observer is exponentially large; property tests that synthesize skip those
MAX_NP = 200

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load(name: str):
    return load_model(fixture_path(name))


@pytest.fixture
def pedestrian():
    return load("pedestrian.tdes")


@pytest.fixture
def example2():
    return load("nonfifo_example.tdes")


@st.composite
def random_tdes(draw, max_states=8, events=("a", "b", "u"), tick_prob=True):
    """Deterministic automaton with tick, reachable or not."""
    n = draw(st.integers(1, max_states))
    states = [f"s{i}" for i in range(n)]
    alphabet = list(events) + ["tick"]
    trans = []
    for s in states:
        for e in alphabet:
            if draw(st.booleans()) and draw(st.booleans()):
                trans.append((s, e, states[draw(st.integers(0, n - 1))]))
    marked = {s for s in states if draw(st.booleans())}
    return Tdes.build("R", states, set(events), trans, "s0", marked)


@st.composite
def random_plant(draw, max_states=5):
    """Small plant whose first controllable event comes after a tick and
    whose controllable and active events are spaced by ticks, so that the
    channel assumptions hold for Nc=No=1 and Lmax=Mmax=2."""
    n = draw(st.integers(2, max_states))
    states = [f"a{i}" for i in range(n)]
    trans = [("a0", "tick", "a1")]
    for s in states[1:]:
        used = set()
        for e in ("a", "b", "u"):
            if draw(st.integers(0, 2)) == 0 and e not in used:
                used.add(e)
                trans.append((s, e, states[draw(st.integers(1, n - 1))]))
        if draw(st.booleans()):
            trans.append((s, "tick", states[draw(st.integers(1, n - 1))]))
    marked = {s for s in states if draw(st.booleans())} or {states[-1]}
    g = Tdes.build("G", states, {"a", "b", "u"}, trans, "a0", marked)
    events = EventTable([Event("a", True, draw(st.booleans())), Event("b", True), Event("u", False)])
    return g, events


def seeded_plant(rnd):
    """Plain-``random`` counterpart of ``random_plant`` for fixed-seed suites."""
    n = rnd.randint(2, 5)
    states = [f"a{i}" for i in range(n)]
    trans = [("a0", "tick", "a1")]
    for s in states[1:]:
        for e in ("a", "b", "u"):
            if rnd.randint(0, 2) == 0:
                trans.append((s, e, states[rnd.randint(1, n - 1)]))
        if rnd.random() < 0.5:
            trans.append((s, "tick", states[rnd.randint(1, n - 1)]))
    marked = {s for s in states if rnd.random() < 0.5} or {states[-1]}
    g = Tdes.build("G", states, {"a", "b", "u"}, trans, "a0", marked)
    events = EventTable([Event("a", True, rnd.random() < 0.5), Event("b", True), Event("u", False)])
    return g, events
