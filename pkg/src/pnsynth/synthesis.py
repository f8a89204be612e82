"""Monolithic synthesis: pre-checks, separation problems with region reuse, verification."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable

from .lts import (Lts, UnknownState, UnsupportedInput, are_isomorphic, is_backward_deterministic,
                  is_forward_deterministic, is_totally_reachable, useful_labels)
from .petri import DEFAULT_MAX_STATES, PetriNet, add_complement_places, reachability_graph
from .regions import (Region, base_constraints, enumerate_essp, enumerate_ssp, net_from_regions,
                      region_solves, solve_separation)

CHECKS = ("total-reachability", "forward-determinism", "backward-determinism", "useless-labels")


class Outcome(Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    REJECTED = "rejected"


@dataclass
class SynthesisReport:
    outcome: Outcome
    net: PetriNet | None = None
    witness: object = None
    check: str | None = None
    regions_used: int = 0
    problems_reused: int = 0
    elapsed_ms: float = 0.0
    strategy: str = "mono"
    components: int = 1
    verified: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.outcome is Outcome.SOLVED

    def summary(self) -> str:
        if self.outcome is Outcome.SOLVED:
            head = f"Solved: {len(self.net.places)} places, {len(self.net.transitions)} transitions"
        elif self.outcome is Outcome.UNSOLVABLE:
            head = f"Unsolvable: {self.witness}"
        else:
            head = f"Rejected: {self.check}"
        return (f"{head}\nstrategy={self.strategy} components={self.components} "
                f"regions={self.regions_used} reused={self.problems_reused} "
                f"elapsed_ms={self.elapsed_ms:.1f}")


def presynthesis(lts: Lts) -> str | None:
    """Name of the first failed quick check, or None when all pass."""
    if not is_totally_reachable(lts):
        return "total-reachability"
    if not is_forward_deterministic(lts):
        return "forward-determinism"
    if not is_backward_deterministic(lts):
        return "backward-determinism"
    if useful_labels(lts) != lts.labels:
        return "useless-labels"
    return None


def _rejected(check, start, strategy="mono") -> SynthesisReport:
    return SynthesisReport(Outcome.REJECTED, check=check, strategy=strategy,
                           elapsed_ms=(time.perf_counter() - start) * 1000)


def solve_regions(lts: Lts, reuse: bool = True) -> tuple[list[Region] | None, object, int]:
    """Regions solving every separation problem: ``(regions, witness, reused)``.

    ESSPs come first, then SSPs.  With ``reuse`` a problem already solved by
    a cached region is skipped; ``witness`` is the first unsolvable problem.
    """
    base = base_constraints(lts)
    regions: list[Region] = []
    reused = 0
    for p in enumerate_essp(lts):
        if reuse and any(region_solves(r, p) for r in regions):
            reused += 1
            continue
        r = solve_separation(lts, base, p)
        if r is None:
            return None, p, reused
        regions.append(r)
    # rho values of all regions so far, per state: two states are separated
    # by some cached region iff their signatures differ
    sig = {s: tuple(r.rho[s] for r in regions) for s in lts.states}
    for p in enumerate_ssp(lts):
        if reuse and sig[p.s1] != sig[p.s2]:
            reused += 1
            continue
        r = solve_separation(lts, base, p)
        if r is None:
            return None, p, reused
        regions.append(r)
        for s in lts.states:
            sig[s] += (r.rho[s],)
    unique = []
    for r in regions:
        if r not in unique:
            unique.append(r)
    return unique, None, reused


def synthesize(lts: Lts, *, reuse: bool = True, check: bool = True,
               verify_result: bool = False, max_states: int = DEFAULT_MAX_STATES) -> SynthesisReport:
    start = time.perf_counter()
    if check:
        failed = presynthesis(lts)
        if failed:
            return _rejected(failed, start)
    regions, witness, reused = solve_regions(lts, reuse)
    if regions is None:
        return SynthesisReport(Outcome.UNSOLVABLE, witness=witness, problems_reused=reused,
                               elapsed_ms=(time.perf_counter() - start) * 1000)
    net = net_from_regions(lts, regions)
    report = SynthesisReport(Outcome.SOLVED, net=net, regions_used=len(regions), problems_reused=reused)
    if verify_result:
        report.verified = verify(net, lts, max_states)
        if not report.verified:
            raise AssertionError("synthesized net does not reproduce its input")
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


def fresh_label(taken: Iterable[str], start: int = 0) -> str:
    taken = set(taken)
    k = start
    while f"__u{k}" in taken:
        k += 1
    return f"__u{k}"


def without_transitions(net: PetriNet, drop: Iterable[str]) -> PetriNet:
    drop = set(drop)
    flow = {(x, y): w for (x, y), w in net.flow.items() if x not in drop and y not in drop}
    return PetriNet(net.places, [t for t in net.transitions if t not in drop], flow, net.initial)


def synthesize_adequate(lts: Lts, s: Hashable | Iterable[Hashable]) -> SynthesisReport:
    """Synthesize so that the marking of ``s`` is dominated by no other reachable one.

    ``s`` may also be a collection of states; all of them are then forced at
    once, each with its own fresh loop label.
    """
    start = time.perf_counter()
    if s in lts:
        targets = [s]
    elif isinstance(s, str):
        raise UnknownState(s)
    else:
        targets = list(s)
    for x in targets:
        if x not in lts:
            raise UnknownState(x)
    failed = presynthesis(lts)
    if failed:
        return _rejected(failed, start)
    loops = []
    taken = set(lts.labels)
    for x in targets:
        u = fresh_label(taken)
        taken.add(u)
        loops.append((x, u, x))
    extended = Lts(lts.states, taken, list(lts.arcs) + loops, lts.initial)
    regions, witness, reused = solve_regions(extended)
    if regions is not None:
        net = without_transitions(net_from_regions(extended, regions), [u for _, u, _ in loops])
        report = SynthesisReport(Outcome.SOLVED, net=net, regions_used=len(regions),
                                 problems_reused=reused)
    else:
        report = synthesize(lts, check=False)
        if report.solved:
            report.net = add_complement_places(report.net, reachability_graph(report.net))
            report.notes.append("complement places")
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


def verify(net: PetriNet, lts: Lts, max_states: int = DEFAULT_MAX_STATES) -> bool:
    """True iff the reachability graph of ``net`` is isomorphic to ``lts``."""
    if set(net.transitions) != lts.labels:
        return False
    rg = reachability_graph(net, max_states)
    try:
        return are_isomorphic(rg, lts) is not None
    except UnsupportedInput:
        return False


def marking_map(net: PetriNet, lts: Lts, max_states: int = DEFAULT_MAX_STATES) -> dict:
    """Marking of ``net`` corresponding to each state of ``lts`` (which it must solve)."""
    rg = reachability_graph(net, max_states)
    iso = are_isomorphic(lts, rg)
    if iso is None:
        raise ValueError("net does not solve the given system")
    return {s: rg.marking(m) for s, m in iso.items()}
