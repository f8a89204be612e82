"""Decomposition trees and the bottom-up recombination of component nets."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Hashable, Union

from .lts import Lts, articulate_with_map, product_many, run, shortest_paths
from .petri import PetriNet, articulate_pn_with_map, disjoint_sum_with_map
from .synthesis import (Outcome, SynthesisReport, marking_map, synthesize, synthesize_adequate,
                        verify)


def _labels(lts: Lts) -> str:
    return "{" + ",".join(sorted(lts.labels)) + "}"


@dataclass(frozen=True)
class Leaf:
    lts: Lts

    def __str__(self):
        return _labels(self.lts)


@dataclass(frozen=True)
class Product:
    children: tuple
    lts: Lts

    def __str__(self):
        return "(" + " * ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class Articulation:
    left: "Tree"
    state: Hashable
    right: "Tree"
    lts: Lts

    def __str__(self):
        return f"({self.left} <{self.state}> {self.right})"


Tree = Union[Leaf, Product, Articulation]


def leaves(tree: Tree) -> list[Leaf]:
    if isinstance(tree, Leaf):
        return [tree]
    if isinstance(tree, Product):
        return [x for c in tree.children for x in leaves(c)]
    return leaves(tree.left) + leaves(tree.right)


def projections(lts: Lts, parts) -> list[dict]:
    """For each factor, map every state of ``lts`` to the factor state it projects to."""
    paths = shortest_paths(lts)
    out = []
    for part in parts:
        keep = part.labels
        out.append({s: run(part, [a for a in w if a in keep]) for s, w in paths.items()})
    return out


def evaluate(tree: Tree) -> tuple[Lts, dict]:
    """Rebuild the system a tree describes from its leaves alone.

    Returns the rebuilt system and the map from the states of ``tree.lts``
    to its states.
    """
    if isinstance(tree, Leaf):
        return tree.lts, {s: s for s in tree.lts.states}
    if isinstance(tree, Product):
        built = [evaluate(c) for c in tree.children]
        prod = product_many([b for b, _ in built])
        proj = projections(tree.lts, [c.lts for c in tree.children])
        embed = {s: tuple(emb[pr[s]] for (_, emb), pr in zip(built, proj)) for s in tree.lts.states}
        return prod, embed
    left, lemb = evaluate(tree.left)
    right, remb = evaluate(tree.right)
    whole, rename = articulate_with_map(left, lemb[tree.state], right)
    embed = {}
    for s in tree.lts.states:
        embed[s] = lemb[s] if s in tree.left.lts else rename[remb[s]]
    return whole, embed


@dataclass
class _Partial:
    net: PetriNet
    markings: dict  # state of the node's lts -> marking
    regions: int = 0
    reused: int = 0
    components: int = 0


class _Failed(Exception):
    def __init__(self, report: SynthesisReport):
        self.report = report


def _renamed_marking(m: dict, rename: dict) -> dict:
    return {rename.get(p, p): v for p, v in m.items()}


def _solve_leaf(leaf: Leaf, adequate: set, leaf_solver) -> _Partial:
    if leaf_solver is not None:
        report = leaf_solver(leaf.lts, adequate)
    elif adequate:
        report = synthesize_adequate(leaf.lts, sorted(adequate, key=leaf.lts.index))
    else:
        report = synthesize(leaf.lts)
    if not report.solved:
        raise _Failed(report)
    return _Partial(report.net, marking_map(report.net, leaf.lts), report.regions_used,
                    report.problems_reused, report.components)


def _solve(tree: Tree, adequate: set, leaf_solver) -> _Partial:
    if isinstance(tree, Leaf):
        return _solve_leaf(tree, adequate, leaf_solver)
    if isinstance(tree, Product):
        proj = projections(tree.lts, [c.lts for c in tree.children])
        parts = [_solve(c, {pr[q] for q in adequate}, leaf_solver)
                 for c, pr in zip(tree.children, proj)]
        net = parts[0].net
        renames = [{}]
        for part in parts[1:]:
            net, rename = disjoint_sum_with_map(net, part.net)
            renames.append(rename)
        markings = {}
        for q in tree.lts.states:
            m = {}
            for part, pr, rename in zip(parts, proj, renames):
                m.update(_renamed_marking(part.markings[pr[q]], rename))
            markings[q] = m
        return _Partial(net, markings, sum(p.regions for p in parts), sum(p.reused for p in parts),
                        sum(p.components for p in parts))
    s = tree.state
    in_left = tree.left.lts
    left = _solve(tree.left, {q for q in adequate if q in in_left} | {s}, leaf_solver)
    right = _solve(tree.right, {q for q in adequate if q not in in_left}, leaf_solver)
    net, rename = articulate_pn_with_map(left.net, left.markings[s], right.net,
                                         reachable=list(left.markings.values()))
    r0 = _renamed_marking(right.markings[tree.right.lts.initial], rename)
    markings = {}
    for q in tree.lts.states:
        if q in in_left:
            markings[q] = {**left.markings[q], **r0}
        else:
            markings[q] = {**left.markings[s], **_renamed_marking(right.markings[q], rename)}
    return _Partial(net, markings, left.regions + right.regions, left.reused + right.reused,
                    left.components + right.components)


def solve_tree(tree: Tree, adequate=(), verify_result: bool = False, leaf_solver=None,
               with_markings: bool = False):
    """Synthesize every leaf and recombine the nets along the tree.

    Leaves that sit left of an articulation are forced adequate at the
    joint states they own.  ``leaf_solver(lts, adequate_states)`` replaces
    the default leaf synthesis when given.
    """
    start = time.perf_counter()
    try:
        part = _solve(tree, set(adequate), leaf_solver)
    except _Failed as failure:
        report = failure.report
        report.elapsed_ms = (time.perf_counter() - start) * 1000
        report.components = len(leaves(tree))
        return (report, None) if with_markings else report
    report = SynthesisReport(Outcome.SOLVED, net=part.net, regions_used=part.regions,
                             problems_reused=part.reused, components=part.components)
    if verify_result:
        report.verified = verify(part.net, tree.lts)
        if not report.verified:
            raise AssertionError("recombined net does not reproduce its input")
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return (report, part.markings) if with_markings else report
