import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pnsynth import fixtures
from pnsynth.lts import Lts, reachable, useful_labels
from pnsynth.petri import PetriNet, ResourceError, reachability_graph

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def fx():
    """Bundled systems by stem, e.g. ``fx("ts21")``."""
    cache = {}

    def get(stem):
        if stem not in cache:
            cache[stem] = fixtures.load(stem)
        return cache[stem]
    return get


@st.composite
def nets(draw, max_places=4, max_transitions=4, max_weight=2, max_tokens=2, prefix=""):
    np_ = draw(st.integers(1, max_places))
    nt = draw(st.integers(1, max_transitions))
    places = [f"{prefix}p{i}" for i in range(np_)]
    trans = [f"{prefix}t{i}" for i in range(nt)]
    weight = st.integers(0, max_weight)
    flow = {}
    for p in places:
        for t in trans:
            flow[(p, t)] = draw(weight)
            flow[(t, p)] = draw(weight)
    m0 = {p: draw(st.integers(0, max_tokens)) for p in places}
    return PetriNet(places, trans, flow, m0)


def bounded_rg(net, cap=64):
    """The reachability graph, or None if the net is unbounded or too large."""
    try:
        return reachability_graph(net, cap)
    except ResourceError:
        return None


@st.composite
def det_lts(draw, max_states=4, labels="abc", prefix=""):
    """A deterministic, totally reachable system with no useless labels."""
    n = draw(st.integers(1, max_states))
    states = [f"{prefix}q{i}" for i in range(n)]
    used_targets = set()
    arcs = []
    for s in states:
        for a in labels:
            t = draw(st.one_of(st.none(), st.sampled_from(states)))
            if t is None or (t, a) in used_targets:
                continue
            used_targets.add((t, a))
            arcs.append((s, prefix + a, t))
    lts = Lts.from_arcs(states[0], arcs, states=states)
    keep = set(reachable(lts, lts.initial))
    arcs = [x for x in arcs if x[0] in keep]
    labels_used = {a for _, a, _ in arcs}
    return Lts([s for s in states if s in keep], labels_used, arcs, states[0])


def live_rg(net, cap=64):
    """Like bounded_rg, but also None when some transition never fires."""
    rg = bounded_rg(net, cap)
    if rg is None or useful_labels(rg) != rg.labels:
        return None
    return rg


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
