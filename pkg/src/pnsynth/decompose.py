"""Mixed recursive decomposition and divide-and-conquer synthesis."""

from __future__ import annotations

import time

from .articulation import articul_expression, expression_tree
from .factorization import NotAProduct, factor
from .lts import Lts, restrict, self_loop_labels, single_state
from .petri import PetriNet
from .synthesis import Outcome, SynthesisReport, presynthesis, verify
from .tree import Articulation, Leaf, Product, Tree, evaluate, leaves, solve_tree

__all__ = ["Leaf", "Product", "Articulation", "Tree", "decompose", "ambiguous_form",
           "synthesize_mixed", "evaluate", "leaves"]


def _factors(lts: Lts) -> list[Lts]:
    try:
        return factor(lts)
    except NotAProduct:
        # left whole; monolithic synthesis then reports it unsolvable
        return [lts]


def decompose(lts: Lts, prefer_product: bool = True, depth: int | None = None) -> Tree:
    """Split ``lts`` into products and articulations as far as possible.

    Factorization is tried before articulation at every level unless
    ``prefer_product`` is false.  ``depth`` bounds the recursion and
    defaults to the number of labels.
    """
    if depth is None:
        depth = len(lts.labels)
    if depth <= 0:
        return Leaf(lts)

    def rec(sub: Lts) -> Tree:
        return decompose(sub, prefer_product, depth - 1)

    def as_product():
        parts = _factors(lts)
        if len(parts) > 1:
            return Product(tuple(rec(f) for f in parts), lts)
        return None

    def as_articulation():
        expr = articul_expression(lts)
        if expr is not None:
            return expression_tree(lts, expr, rec)
        return None

    tries = (as_product, as_articulation) if prefer_product else (as_articulation, as_product)
    for attempt in tries:
        tree = attempt()
        if tree is not None:
            return tree
    return Leaf(lts)


def ambiguous_form(lts: Lts):
    """Detect ``(core x loops_T2)`` glued at ``s1`` to a one-state ``loops_T3``.

    Returns ``(core, s1, T2, T3)`` or None.  T2 holds labels looping at every
    state, T3 labels looping at ``s1`` only.  A single state carrying loops
    counts as the degenerate form with every label in T2.
    """
    loops = self_loop_labels(lts)
    if not loops:
        return None
    where: dict = {}
    only_loops = set()
    for a in loops:
        arcs = [(s, t) for s, b, t in lts.arcs if b == a]
        if all(s == t for s, t in arcs):
            only_loops.add(a)
            where[a] = {s for s, _ in arcs}
    if len(lts.states) == 1:
        t2 = frozenset(only_loops)
        if not t2:
            return None
        core = restrict(lts, lts.labels - t2)
        return core, lts.initial, t2, frozenset()
    every = set(lts.states)
    t2 = frozenset(a for a in only_loops if where[a] == every)
    singles = [a for a in only_loops if len(where[a]) == 1]
    if not t2 or not singles:
        return None
    s1 = min((next(iter(where[a])) for a in singles), key=lts.index)
    t3 = frozenset(a for a in singles if where[a] == {s1})
    core = restrict(lts, lts.labels - t2 - t3)
    return core, s1, t2, t3


def _with_loop_transitions(net: PetriNet, marking: dict, t2, t3) -> PetriNet:
    flow = dict(net.flow)
    for t in t3:
        for p, v in marking.items():
            if v > 0:
                flow[(p, t)] = v
                flow[(t, p)] = v
    transitions = list(net.transitions) + sorted(t3) + sorted(t2)
    return PetriNet(net.places, transitions, flow, net.initial)


def synthesize_mixed(lts: Lts, verify_result: bool = False, prefer_product: bool = True) -> SynthesisReport:
    start = time.perf_counter()
    failed = presynthesis(lts)
    if failed:
        return SynthesisReport(Outcome.REJECTED, check=failed, strategy="mixed",
                               elapsed_ms=(time.perf_counter() - start) * 1000)
    form = ambiguous_form(lts)
    if form is not None:
        core, s1, t2, t3 = form
        report, markings = solve_tree(decompose(core, prefer_product), adequate={s1},
                                      with_markings=True)
        if report.solved:
            report.net = _with_loop_transitions(report.net, markings[s1], t2, t3)
            report.notes.append(f"ambiguous form at {s1}: T2={sorted(t2)} T3={sorted(t3)}")
    else:
        tree = decompose(lts, prefer_product)
        report = solve_tree(tree)
    if report.solved and verify_result:
        report.verified = verify(report.net, lts)
        if not report.verified:
            raise AssertionError("mixed synthesis produced a net that does not reproduce its input")
    report.strategy = "mixed"
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report
