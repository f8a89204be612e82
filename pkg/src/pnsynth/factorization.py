"""Product factorization through general diamonds."""

from __future__ import annotations

import time
from itertools import combinations

from networkx.utils import UnionFind

from .lts import Lts, are_isomorphic, product_many, restrict
from .synthesis import Outcome, SynthesisReport, presynthesis

LabelPartition = tuple  # tuple of frozensets, ordered by smallest label


class NotAProduct(Exception):
    def __init__(self, witness: str):
        super().__init__(witness)
        self.witness = witness


def as_partition(blocks) -> LabelPartition:
    return tuple(sorted((frozenset(b) for b in blocks if b), key=min))


def _signed_edges(lts: Lts, s):
    out = [(a, 1, t) for a, t in lts.out_arcs(s)]
    out += [(a, -1, t) for a, t in lts.in_arcs(s)]
    return out


def _move(lts: Lts, s, label, sign):
    return lts.successors(s, label) if sign > 0 else lts.predecessors(s, label)


def _violations_at(lts: Lts, s):
    """Label pairs whose signed edges at ``s`` do not close into a diamond."""
    edges = _signed_edges(lts, s)
    for (a, sa, s1), (b, sb, s2) in combinations(edges, 2):
        if a == b:
            continue
        ends = set(_move(lts, s1, b, sb))
        if not ends or ends.isdisjoint(_move(lts, s2, a, sa)):
            yield (a, b)


def gdiam_violations(lts: Lts) -> set:
    """Unordered label pairs that fail to form general diamonds somewhere."""
    found = set()
    for s in lts.states:
        for a, b in _violations_at(lts, s):
            found.add(frozenset((a, b)))
    return found


def label_classes(lts: Lts) -> LabelPartition:
    uf = UnionFind(sorted(lts.labels))
    count = len(lts.labels)
    for s in lts.states:
        if count <= 1:
            break
        for a, b in _violations_at(lts, s):
            if uf[a] != uf[b]:
                uf.union(a, b)
                count -= 1
                if count == 1:
                    break
    return as_partition(uf.to_sets())


def factor(lts: Lts) -> list[Lts]:
    classes = label_classes(lts)
    if len(classes) <= 1:
        return [lts]
    factors = [restrict(lts, block) for block in classes]
    size = 1
    for f in factors:
        size *= len(f.states)
    if size != len(lts.states):
        raise NotAProduct(f"factor sizes multiply to {size}, expected {len(lts.states)}")
    if are_isomorphic(product_many(factors), lts) is None:
        raise NotAProduct("product of the factors is not isomorphic to the input")
    return factors


def synthesize_factorized(lts: Lts, verify_result: bool = False) -> SynthesisReport:
    from .tree import Leaf, Product, solve_tree

    start = time.perf_counter()
    failed = presynthesis(lts)
    if failed:
        return SynthesisReport(Outcome.REJECTED, check=failed, strategy="factor",
                               elapsed_ms=(time.perf_counter() - start) * 1000)
    try:
        factors = factor(lts)
    except NotAProduct as e:
        return SynthesisReport(Outcome.UNSOLVABLE, witness=e.witness, strategy="factor",
                               elapsed_ms=(time.perf_counter() - start) * 1000)
    if len(factors) == 1:
        tree = Leaf(lts)
    else:
        tree = Product(tuple(Leaf(f) for f in factors), lts)
    report = solve_tree(tree, verify_result=verify_result)
    report.strategy = "factor"
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report
