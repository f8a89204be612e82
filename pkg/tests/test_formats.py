import pytest
from hypothesis import assume, given

from pnsynth import fixtures
from pnsynth.formats import (DuplicateArc, DuplicateName, FormatError, ReservedName, SyntaxError,
                             emit_lts, emit_pn, parse_lts, parse_pn)
from pnsynth.lts import are_isomorphic, product
from pnsynth.petri import PetriNet, reachability_graph
from pnsynth.synthesis import synthesize

from conftest import det_lts, nets


def test_parse_chain(fx):
    lts = parse_lts("initial i\narc i b s1\narc s1 b s2")
    assert lts == fx("chain_bb")


def test_lts_round_trip_is_stable():
    for name in fixtures.names():
        if name.endswith(".lts"):
            once = emit_lts(parse_lts(fixtures.text(name)))
            assert emit_lts(parse_lts(once)) == once


def test_lts_errors():
    with pytest.raises(ReservedName):
        parse_lts("initial i\narc i __u0 i")
    with pytest.raises(DuplicateArc) as err:
        parse_lts("initial i\narc i a s\narc i a s")
    assert err.value.line == 3
    with pytest.raises(SyntaxError):
        parse_lts("arc i a s")
    with pytest.raises(SyntaxError):
        parse_lts("initial i\narc i a")
    with pytest.raises(SyntaxError):
        parse_lts("initial i\narc i a-b s")


def test_lts_declared_states_and_labels():
    lts = parse_lts("states i lonely\nlabels a z\ninitial i\narc i a i\n")
    assert set(lts.states) == {"i", "lonely"} and lts.labels == {"a", "z"}
    text = emit_lts(lts)
    assert parse_lts(text) == lts


def test_emit_orders_arcs():
    text = emit_lts(parse_lts("initial i\narc s b t\narc i a s\narc i c s"))
    arcs = [l for l in text.splitlines() if l.startswith("arc")]
    assert arcs == ["arc i a s", "arc i c s", "arc s b t"]


def test_tuple_states_are_flattened(fx):
    grid = product(fx("chain_a"), fx("chain_bb"))
    again = parse_lts(emit_lts(grid))
    assert are_isomorphic(again, grid)


def test_parse_pn(fx):
    net = parse_pn("place p 1\ntrans a\narc p a")
    assert net == PetriNet(["p"], ["a"], {("p", "a"): 1}, {"p": 1})
    assert are_isomorphic(reachability_graph(net), fx("chain_a"))
    text = emit_pn(fx("net21"))
    assert emit_pn(parse_pn(text)) == text
    again = parse_pn(text)
    assert again.flow == fx("net21").flow and again.initial == fx("net21").initial


def test_pn_errors():
    with pytest.raises(SyntaxError):
        parse_pn("place p 1\ntrans a\narc p a 0")
    with pytest.raises(DuplicateName):
        parse_pn("place p\ntrans p")
    with pytest.raises(SyntaxError):
        parse_pn("place p\ntrans a\narc p q")
    with pytest.raises(SyntaxError):
        parse_pn("place p\nplace q\ntrans a\narc p q")
    with pytest.raises(FormatError):
        parse_pn("place p -1")


@given(det_lts())
def test_lts_round_trip_property(lts):
    text = emit_lts(lts)
    assert parse_lts(text) == lts
    assert emit_lts(parse_lts(text)) == text


@given(nets())
def test_pn_round_trip_property(net):
    text = emit_pn(net)
    assert emit_pn(parse_pn(text)) == text
    again = parse_pn(text)
    assert again.flow == net.flow and again.initial == net.initial


@given(det_lts())
def test_synthesized_nets_survive_round_trip(lts):
    report = synthesize(lts)
    assume(report.solved)
    out = parse_pn(emit_pn(report.net))
    assert are_isomorphic(reachability_graph(out), lts)
