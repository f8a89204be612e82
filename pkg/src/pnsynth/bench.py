"""Benchmark families, timing runs, regression fits and predicted gains."""

from __future__ import annotations

import csv
import math
import statistics
import time
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .articulation import synthesize_articulated
from .decompose import synthesize_mixed
from .factorization import synthesize_factorized
from .lts import Lts, articulate_lts, articulate_with_map, product_many
from .synthesis import synthesize, verify

FAMILIES = ("star", "daisy", "caterpillar", "product_power")
STRATEGIES = ("mono", "factor", "artic", "mixed", "per-component-sum")
CSV_COLUMNS = ("family", "n", "states", "strategy", "elapsed_ms", "verified")


class DegenerateData(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    family: str
    component: Lts
    n: int
    attach: tuple | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")


@dataclass
class BenchRecord:
    family: str
    n: int
    states: int
    strategy: str
    elapsed_ms: float
    repetitions: int
    verified: bool
    outcome: str = "solved"


def relabel(lts: Lts, suffix: str) -> Lts:
    arcs = [(s, f"{a}{suffix}", t) for s, a, t in lts.arcs]
    return Lts(lts.states, {f"{a}{suffix}" for a in lts.labels}, arcs, lts.initial)


def copies(component: Lts, n: int) -> list[Lts]:
    return [relabel(component, f"_{i}") for i in range(1, n + 1)]


def _anchors(spec: FamilySpec) -> list:
    if spec.attach:
        return list(spec.attach)
    rest = [s for s in spec.component.states if s != spec.component.initial]
    return rest or [spec.component.initial]


def generate(spec: FamilySpec) -> Lts:
    parts = copies(spec.component, spec.n)
    if spec.family == "product_power":
        return product_many(parts)
    whole = parts[0]
    if spec.family == "star":
        for p in parts[1:]:
            whole = articulate_lts(whole, whole.initial, p)
    elif spec.family == "daisy":
        anchors = _anchors(spec)
        for i, p in enumerate(parts[1:]):
            whole = articulate_lts(whole, anchors[i % len(anchors)], p)
    else:
        anchor = _anchors(spec)[0]
        names = {s: s for s in parts[0].states}
        for p in parts[1:]:
            whole, names = articulate_with_map(whole, names[anchor], p)
    return whole


def expected_states(spec: FamilySpec) -> int:
    k = len(spec.component.states)
    if spec.family == "product_power":
        return k ** spec.n
    return k * spec.n - spec.n + 1


def predicted_gain(kind: str, h: float, k: int, states: int = 1) -> float:
    """Rough speed-up of splitting into ``k`` parts a problem costing ``size**h``."""
    if h <= 0 or k < 1:
        raise ValueError("need h > 0 and k >= 1")
    if kind == "product":
        return states ** (h * (1 - 1 / k)) / k
    if kind == "articulation":
        return k ** (h - 1)
    raise ValueError(f"unknown kind {kind!r}")


_RUNNERS: dict[str, Callable] = {
    "mono": synthesize,
    "factor": synthesize_factorized,
    "artic": synthesize_articulated,
    "mixed": synthesize_mixed,
}


def _timed(strategy: str, spec: FamilySpec, n: int, lts: Lts) -> tuple[float, bool, str]:
    if strategy == "per-component-sum":
        parts = copies(spec.component, n)
        t0 = time.perf_counter()
        reports = [synthesize(p) for p in parts]
        elapsed = (time.perf_counter() - t0) * 1000
        ok = all(r.solved and verify(r.net, p) for r, p in zip(reports, parts))
        outcome = "solved" if all(r.solved for r in reports) else "unsolvable"
        return elapsed, ok, outcome
    runner = _RUNNERS[strategy]
    t0 = time.perf_counter()
    report = runner(lts)
    elapsed = (time.perf_counter() - t0) * 1000
    ok = report.solved and verify(report.net, lts)
    return elapsed, ok, report.outcome.value


def run_bench(spec: FamilySpec, strategies: Sequence[str], repetitions: int = 3,
              sizes: Sequence[int] | None = None) -> list[BenchRecord]:
    """Time each strategy on the family for every size up to ``spec.n``."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    for s in strategies:
        if s not in STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}")
    records = []
    for n in (sizes or range(1, spec.n + 1)):
        lts = generate(replace(spec, n=n))
        for strategy in strategies:
            times, verified, outcome = [], True, "solved"
            for _ in range(repetitions):
                try:
                    elapsed, ok, outcome = _timed(strategy, spec, n, lts)
                except Exception as e:  # recorded, not fatal
                    elapsed, ok, outcome = 0.0, False, f"error: {e}"
                times.append(elapsed)
                verified = verified and ok
            records.append(BenchRecord(spec.family, n, len(lts.states), strategy,
                                       statistics.median(times), repetitions, verified, outcome))
    return records


def write_csv(records: Sequence[BenchRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([r.family, r.n, r.states, r.strategy, f"{r.elapsed_ms:.3f}",
                        "true" if r.verified else "false"])


def fit(data: Sequence[tuple[float, float]], model: str) -> tuple[float, float]:
    """Least-squares fit in log space.

    ``power`` returns ``(a, b)`` for ``y = a * x**b``; ``exponential``
    returns ``(a, b)`` for ``y = a * b**x``.
    """
    if len(data) < 3:
        raise ValueError("need at least 3 points")
    xs = [float(x) for x, _ in data]
    ys = [float(y) for _, y in data]
    if any(y <= 0 for y in ys) or any(x <= 0 for x in xs):
        raise ValueError("data must be positive")
    if len(set(xs)) == 1:
        raise DegenerateData("all x values are equal")
    logy = [math.log(y) for y in ys]
    if model == "power":
        slope, intercept = statistics.linear_regression([math.log(x) for x in xs], logy)
        return math.exp(intercept), slope
    if model == "exponential":
        slope, intercept = statistics.linear_regression(xs, logy)
        return math.exp(intercept), math.exp(slope)
    raise ValueError(f"unknown model {model!r}")
