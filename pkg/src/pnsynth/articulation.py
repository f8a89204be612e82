"""Articulation detection: partition refinement, the class/state graph, expressions."""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Union

import networkx as nx
from networkx.utils import UnionFind

from .factorization import LabelPartition, as_partition
from .lts import Lts, adjacency, articulate_lts, reachable, restrict
from .synthesis import Outcome, SynthesisReport, presynthesis
from .tree import Articulation, Leaf, solve_tree


@dataclass(frozen=True)
class Component:
    labels: frozenset
    root: Hashable

    def __str__(self):
        return "{" + ",".join(sorted(self.labels)) + "}"


@dataclass(frozen=True)
class Joint:
    left: "Expression"
    state: Hashable
    right: "Expression"

    def __str__(self):
        return f"({self.left} <{self.state}> {self.right})"


Expression = Union[Component, Joint]


def expression_labels(expr: Expression) -> frozenset:
    if isinstance(expr, Component):
        return expr.labels
    return expression_labels(expr.left) | expression_labels(expr.right)


@dataclass
class ArticulationGraph:
    classes: LabelPartition
    adjacency: tuple          # adjacency set of each class
    state_nodes: tuple        # in discovery order
    graph: nx.Graph           # nodes ("class", i) and ("state", s)

    def classes_at(self, s) -> list[int]:
        return sorted(i for kind, i in self.graph[("state", s)])

    def states_of(self, i: int) -> list:
        return [s for kind, s in self.graph[("class", i)]]

    def edges(self) -> set:
        return {(s, self.classes[i]) for s in self.state_nodes for i in self.classes_at(s)}

    def is_acyclic(self) -> bool:
        return nx.is_forest(self.graph)


def _merge_shared(lts: Lts, blocks: list) -> list:
    """Merge blocks whose adjacency sets share two or more states, to fixpoint."""
    blocks = [frozenset(b) for b in blocks]
    while True:
        adj = [adjacency(lts, b) for b in blocks]
        at: dict = {}
        for i, a in enumerate(adj):
            for s in a:
                at.setdefault(s, []).append(i)
        shared: dict = {}
        uf = UnionFind(range(len(blocks)))
        merged = False
        for s, idx in at.items():
            for i, j in combinations(idx, 2):
                shared[i, j] = shared.get((i, j), 0) + 1
                if shared[i, j] == 2 and uf[i] != uf[j]:
                    uf.union(i, j)
                    merged = True
        if not merged:
            return blocks
        blocks = [frozenset().union(*(blocks[i] for i in group)) for group in uf.to_sets()]


def refine_partition(lts: Lts, start: LabelPartition | None = None, fuse: bool = True) -> LabelPartition:
    """Coarsen ``start`` (singletons by default) until no two blocks share two adjacent states.

    With ``fuse`` the blocks lying on a cycle of the class/state graph are
    merged as well and the whole process repeats until the graph is a tree,
    so the result is the partition articulation detection works with.
    """
    blocks = [frozenset([a]) for a in sorted(lts.labels)] if start is None else list(start)
    part = as_partition(_merge_shared(lts, blocks))
    if fuse:
        part = fuse_cycles(lts, build_graph(lts, part))
    return part


def build_graph(lts: Lts, partition: LabelPartition) -> ArticulationGraph:
    classes = as_partition(partition)
    adj = tuple(adjacency(lts, b) for b in classes)
    g = nx.Graph()
    g.add_nodes_from(("class", i) for i in range(len(classes)))
    nodes = []
    for s in lts.states:
        owners = [i for i, a in enumerate(adj) if s in a]
        if len(owners) >= 2:
            nodes.append(s)
            g.add_edges_from((("state", s), ("class", i)) for i in owners)
    if not nx.is_connected(g):
        raise AssertionError("class/state graph is not connected")
    return ArticulationGraph(classes, adj, tuple(nodes), g)


def fuse_cycles(lts: Lts, graph: ArticulationGraph) -> LabelPartition:
    while True:
        cycles = nx.cycle_basis(graph.graph)
        if not cycles:
            return graph.classes
        uf = UnionFind(range(len(graph.classes)))
        for cycle in cycles:
            idx = [i for kind, i in cycle if kind == "class"]
            for i in idx[1:]:
                uf.union(idx[0], i)
        blocks = [frozenset().union(*(graph.classes[i] for i in group)) for group in uf.to_sets()]
        graph = build_graph(lts, as_partition(_merge_shared(lts, blocks)))


def component_lts(lts: Lts, labels, root) -> Lts:
    return restrict(lts.with_initial(root), labels)


def articul_expression(lts: Lts, partition: LabelPartition | None = None) -> Expression | None:
    """An articulation expression for ``lts``, or None when it has no articulation."""
    part = refine_partition(lts) if partition is None else partition
    if len(part) <= 1:
        return None
    graph = build_graph(lts, part)

    def sub(root, i) -> Expression:
        expr: Expression = Component(graph.classes[i], root)
        children = []
        for s in graph.states_of(i):
            if s == root:
                continue
            for j in graph.classes_at(s):
                if j != i:
                    children.append((s, sub(s, j)))
        children.sort(key=lambda c: min(expression_labels(c[1])))
        for s, child in children:
            expr = Joint(expr, s, child)
        return expr

    init = lts.initial
    if init in graph.state_nodes:
        parts = sorted((sub(init, j) for j in graph.classes_at(init)),
                       key=lambda e: min(expression_labels(e)))
        expr = parts[0]
        for p in parts[1:]:
            expr = Joint(expr, init, p)
        return expr
    (first,) = [i for i, a in enumerate(graph.adjacency) if init in a]
    return sub(init, first)


def evaluate_expression(lts: Lts, expr: Expression) -> Lts:
    if isinstance(expr, Component):
        return component_lts(lts, expr.labels, expr.root)
    left = evaluate_expression(lts, expr.left)
    return articulate_lts(left, expr.state, evaluate_expression(lts, expr.right))


def expression_tree(lts: Lts, expr: Expression, component=None):
    """Turn an expression into a decomposition tree over sub-systems of ``lts``.

    ``component(sub_lts)`` builds the subtree of each component; plain
    leaves by default.
    """
    if isinstance(expr, Component):
        sub = component_lts(lts, expr.labels, expr.root)
        return Leaf(sub) if component is None else component(sub)
    left = expression_tree(lts, expr.left, component)
    right = expression_tree(lts, expr.right, component)
    return Articulation(left, expr.state, right, evaluate_expression(lts, expr))


def is_sequence_joint(left: Lts, s, right: Lts) -> bool:
    """Whether gluing ``right`` at ``s`` behaves like sequential composition."""
    dead_end = not any(True for _ in left.out_arcs(s))
    home = all(s in reachable(left, x) for x in left.states)
    if dead_end and home:
        return True
    start = right.initial
    return not any(start in reachable(right, t) for _, t in right.out_arcs(start))


def synthesize_articulated(lts: Lts, verify_result: bool = False) -> SynthesisReport:
    start = time.perf_counter()
    failed = presynthesis(lts)
    if failed:
        return SynthesisReport(Outcome.REJECTED, check=failed, strategy="artic",
                               elapsed_ms=(time.perf_counter() - start) * 1000)
    expr = articul_expression(lts)
    tree = Leaf(lts) if expr is None else expression_tree(lts, expr)
    report = solve_tree(tree, verify_result=verify_result)
    report.strategy = "artic"
    if expr is None:
        report.notes.append("no articulation")
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report
