import pytest
from hypothesis import assume, given, strategies as st

from pnsynth import fixtures
from pnsynth.articulation import articul_expression
from pnsynth.bench import FamilySpec, generate
from pnsynth.decompose import (Articulation, Leaf, Product, ambiguous_form, decompose, evaluate,
                               leaves, synthesize_mixed)
from pnsynth.lts import are_isomorphic, articulate_lts, product, single_state
from pnsynth.synthesis import presynthesis, synthesize, verify

from conftest import det_lts

CORPUS = [n[:-4] for n in fixtures.names() if n.endswith(".lts")]


def test_seqdiamond_tree(fx):
    seq = fx("seqdiamond")
    tree = decompose(seq)
    assert str(tree) == "({start} <s1> (({a} * {b}) <s4> {end}))"
    assert isinstance(tree, Articulation) and tree.state == "s1"
    assert isinstance(tree.left, Leaf)
    inner = tree.right
    assert isinstance(inner, Articulation) and isinstance(inner.left, Product)
    assert are_isomorphic(evaluate(tree)[0], seq)


def test_grid_tree(fx):
    tree = decompose(fx("grid6"))
    assert isinstance(tree, Product) and len(tree.children) == 2
    a, b = tree.children
    assert are_isomorphic(a.lts, fx("chain_a")) and are_isomorphic(b.lts, fx("chain_bb"))


def test_two_loops_prefer_product():
    loops = single_state("ab", loops=True)
    tree = decompose(loops)
    assert isinstance(tree, Product)
    assert [len(leaf.lts.states) for leaf in leaves(tree)] == [1, 1]


def test_ambiguous_form(fx):
    core, s1, t2, t3 = ambiguous_form(fx("ambiguous"))
    assert (s1, t2, t3) == ("i", {"b"}, {"a"})
    assert core.arcs == {("i", "t", "s")}
    assert ambiguous_form(fx("grid6")) is None
    core, s1, t2, t3 = ambiguous_form(single_state("ab", loops=True))
    assert len(core.states) == 1 and not core.arcs
    assert t2 == {"a", "b"} and not t3


def test_ambiguous_solution_shape(fx):
    amb = fx("ambiguous")
    report = synthesize_mixed(amb, verify_result=True)
    assert report.solved and report.verified
    assert not any("b" in pair for pair in report.net.flow)


def test_mixed_fixtures(fx):
    seq = fx("seqdiamond")
    report = synthesize_mixed(seq, verify_result=True)
    assert report.solved and report.verified
    ts = fx("ts21")
    report = synthesize_mixed(ts)
    assert report.solved and report.components == 1 and verify(report.net, ts)


def test_mixed_caterpillar(fx):
    cat = generate(FamilySpec("caterpillar", fx("ts21"), 3))
    report = synthesize_mixed(cat)
    assert report.solved and report.components == 3
    assert verify(report.net, cat)


def test_mixed_rejects(fx):
    report = synthesize_mixed(fx("diamond_nd_left"))
    assert report.check == "backward-determinism"


def test_articulation_first_flag(fx):
    loops = single_state("ab", loops=True)
    tree = decompose(loops, prefer_product=False)
    assert are_isomorphic(evaluate(tree)[0], loops)


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_strategy_equivalence(fx, name):
    lts = fx(name)
    if presynthesis(lts):
        assert not synthesize_mixed(lts).solved
        return
    tree = decompose(lts)
    assert are_isomorphic(evaluate(tree)[0], lts)
    mono, mixed = synthesize(lts), synthesize_mixed(lts)
    assert mono.outcome is mixed.outcome
    if mono.solved:
        assert verify(mono.net, lts) and verify(mixed.net, lts)
    if isinstance(tree, Product) and sum(len(c.lts.states) > 1 for c in tree.children) >= 2:
        assert articul_expression(lts) is None


@st.composite
def composite_lts(draw):
    a = draw(det_lts(max_states=3, labels="ab", prefix="x"))
    b = draw(det_lts(max_states=3, labels="cd", prefix="y"))
    c = draw(det_lts(max_states=2, labels="ef", prefix="z"))
    if draw(st.booleans()):
        ab = product(a, b)
    else:
        ab = articulate_lts(a, draw(st.sampled_from(a.states)), b)
    return articulate_lts(ab, draw(st.sampled_from(ab.states)), c)


@given(composite_lts())
def test_tree_soundness_and_equivalence(lts):
    assume(presynthesis(lts) is None)
    tree = decompose(lts)
    assert are_isomorphic(evaluate(tree)[0], lts)
    labels = [leaf.lts.labels for leaf in leaves(tree)]
    assert sum(map(len, labels)) == len(frozenset().union(*labels))
    mono, mixed = synthesize(lts), synthesize_mixed(lts)
    assert mono.outcome is mixed.outcome
    if mixed.solved:
        assert verify(mixed.net, lts)


@given(det_lts(max_states=3, labels="ab", prefix="x"), det_lts(max_states=3, labels="cd", prefix="y"))
def test_products_of_big_factors_have_no_articulation(a, b):
    assume(len(a.states) > 1 and len(b.states) > 1)
    p = product(a, b)
    assume(presynthesis(p) is None)
    tree = decompose(p)
    if isinstance(tree, Product) and sum(len(c.lts.states) > 1 for c in tree.children) >= 2:
        assert articul_expression(p) is None
