"""Regions of a transition system and the separation problems they solve."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Sequence

from . import simplex
from .lts import Lts
from .petri import PetriNet


@dataclass(frozen=True)
class SSP:
    s1: Hashable
    s2: Hashable

    def __str__(self):
        return f"SSP({self.s1}, {self.s2})"


@dataclass(frozen=True)
class ESSP:
    s: Hashable
    a: str

    def __str__(self):
        return f"ESSP({self.s}, {self.a})"


SeparationProblem = SSP | ESSP


@dataclass(frozen=True, eq=True)
class Region:
    rho: dict
    backward: dict
    forward: dict

    def is_valid(self, lts: Lts) -> bool:
        for s, a, t in lts.arcs:
            if self.rho[s] < self.backward[a]:
                return False
            if self.rho[t] - self.rho[s] != self.forward[a] - self.backward[a]:
                return False
        values = list(self.rho.values()) + list(self.backward.values()) + list(self.forward.values())
        return all(v >= 0 for v in values)


@dataclass
class ConstraintSystem:
    """Linear rows over region unknowns; every unknown is implicitly >= 0.

    Unknowns are ordered: one per state (discovery order), then the
    backward weights, then the forward weights (labels sorted).
    """

    variables: list
    rows: list
    _presolved: simplex.Presolved | None = field(default=None, repr=False, compare=False)

    def index(self, var) -> int:
        return self._where[var]

    def __post_init__(self):
        self._where = {v: i for i, v in enumerate(self.variables)}

    def presolved(self) -> simplex.Presolved:
        if self._presolved is None:
            self._presolved = simplex.Presolved(len(self.variables), self.rows)
        return self._presolved


def enumerate_ssp(lts: Lts) -> list[SSP]:
    st = lts.states
    return [SSP(st[i], st[j]) for i in range(len(st)) for j in range(i + 1, len(st))]


def enumerate_essp(lts: Lts) -> list[ESSP]:
    labels = lts.sorted_labels()
    return [ESSP(s, a) for s in lts.states for a in labels if not lts.successors(s, a)]


def base_constraints(lts: Lts) -> ConstraintSystem:
    labels = lts.sorted_labels()
    variables = ([("rho", s) for s in lts.states] + [("B", a) for a in labels]
                 + [("F", a) for a in labels])
    ix = {v: i for i, v in enumerate(variables)}
    rows = []
    for s, a, t in lts.sorted_arcs():
        rho_s, rho_t, b, f = ix["rho", s], ix["rho", t], ix["B", a], ix["F", a]
        rows.append(({rho_s: 1, b: -1}, ">=", 0))
        eq: dict = {}
        for var, c in ((rho_t, 1), (rho_s, -1), (f, -1), (b, 1)):
            eq[var] = eq.get(var, 0) + c
        rows.append(({k: v for k, v in eq.items() if v}, "=", 0))
    return ConstraintSystem(variables, rows)


def feasible(system: ConstraintSystem) -> list[Fraction] | None:
    return simplex.feasible(len(system.variables), system.rows)


def _strict_rows(base: ConstraintSystem, p: SeparationProblem) -> list[dict]:
    ix = base.index
    if isinstance(p, ESSP):
        return [{ix(("B", p.a)): 1, ix(("rho", p.s)): -1}]
    if p.s1 == p.s2:
        raise ValueError("state separation needs two distinct states")
    i, j = ix(("rho", p.s1)), ix(("rho", p.s2))
    return [{i: 1, j: -1}, {j: 1, i: -1}]


def _to_region(base: ConstraintSystem, point: Sequence[Fraction]) -> Region:
    den = 1
    for v in point:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in point]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    parts: dict = {"rho": {}, "B": {}, "F": {}}
    for (kind, key), v in zip(base.variables, ints):
        parts[kind][key] = v
    return Region(parts["rho"], parts["B"], parts["F"])


def solve_separation(lts: Lts, base: ConstraintSystem, p: SeparationProblem) -> Region | None:
    """A region solving ``p``, or None when none exists."""
    pre = base.presolved()
    for row in _strict_rows(base, p):
        point = pre.solve([(row, ">=", 1)])
        if point is None:
            continue
        region = _to_region(base, point)
        if not (region.is_valid(lts) and region_solves(region, p)):
            raise AssertionError(f"integer scaling broke the solution of {p}")
        return region
    return None


def region_solves(r: Region, p: SeparationProblem) -> bool:
    if isinstance(p, ESSP):
        return r.rho[p.s] < r.backward[p.a]
    return r.rho[p.s1] != r.rho[p.s2]


def net_from_regions(lts: Lts, regions: Sequence[Region]) -> PetriNet:
    labels = lts.sorted_labels()
    places = [f"p{i}" for i in range(len(regions))]
    flow = {}
    init = {}
    for p, r in zip(places, regions):
        for a in labels:
            if r.backward.get(a):
                flow[(p, a)] = r.backward[a]
            if r.forward.get(a):
                flow[(a, p)] = r.forward[a]
        init[p] = r.rho[lts.initial]
    return PetriNet(places, labels, flow, init)
