"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line; the lines are printed in the
terminal summary and, when this file is run as a script, to stdout.
"""

import random
import statistics
import time

import pytest

from pnsynth import fixtures
from pnsynth.articulation import build_graph, refine_partition, synthesize_articulated
from pnsynth.bench import FamilySpec, expected_states, fit, generate, predicted_gain
from pnsynth.cli import main
from pnsynth.decompose import decompose, synthesize_mixed
from pnsynth.factorization import factor, synthesize_factorized
from pnsynth.lts import Lts, are_isomorphic, product, useful_labels
from pnsynth.petri import (PetriNet, ResourceError, articulate_pn, disjoint_sum, is_dominated,
                           reachability_graph)
from pnsynth.synthesis import marking_map, presynthesis, synthesize, synthesize_adequate, verify
from pnsynth.tree import evaluate

from conftest import ACCEPTANCE

# pinned limits
FIDELITY_SECONDS = 1.0
MONO_SECONDS = 30.0
PRODUCT_SECONDS = 10.0
ORACLE_SECONDS = 300.0
FIT_RTOL = 1e-9
RANDOM_PAIRS = 50
RANDOM_NETS = 200
RG_CAP = 64
SEED = 20261016

TITLES = {
    1: "fixture fidelity: RG(NET21) = TS21",
    2: "monolithic synthesis of TS21",
    3: "product pipeline on GRID6 and random sums",
    4: "articulation detection on BIGFIX",
    5: "adequacy forcing on the AABB split",
    6: "mixed decomposition of SEQDIAMOND",
    7: "rejection of the two non-deterministic systems",
    8: "oracle equivalence on random bounded nets",
    9: "size laws and predicted gains",
    10: "mixed no slower than monolithic on caterpillar(TS21, 10)",
    11: "regression fits recover exact models",
}


def record(number, check):
    """Run ``check`` and log one result line; re-raise failures for pytest."""
    try:
        detail = check()
    except BaseException as e:
        line = f"[FAIL] criterion {number:2d}: {TITLES[number]} -- {type(e).__name__}: {e}"
        ACCEPTANCE[number] = line
        print(line)
        raise
    line = f"[PASS] criterion {number:2d}: {TITLES[number]}" + (f" ({detail})" if detail else "")
    ACCEPTANCE[number] = line
    print(line)


def fx(stem):
    return fixtures.load(stem)


def random_net(rnd, prefix=""):
    np_, nt = rnd.randint(1, 4), rnd.randint(1, 4)
    places = [f"{prefix}p{i}" for i in range(np_)]
    trans = [f"{prefix}t{i}" for i in range(nt)]
    flow = {}
    for p in places:
        for t in trans:
            flow[(p, t)] = rnd.randint(0, 2)
            flow[(t, p)] = rnd.randint(0, 2)
    return PetriNet(places, trans, flow, {p: rnd.randint(0, 2) for p in places})


def bounded(net, cap=RG_CAP):
    try:
        return reachability_graph(net, cap)
    except ResourceError:
        return None


def live_sample(rnd, prefix=""):
    """A bounded random net with at least two reachable markings.

    Transitions that never fire are dropped; they carry no behaviour and
    would only add unused labels to the reachability graph.
    """
    while True:
        net = random_net(rnd, prefix)
        rg = bounded(net)
        if rg is None or len(rg.states) < 2:
            continue
        dead = rg.labels - useful_labels(rg)
        if dead:
            keep = [t for t in net.transitions if t not in dead]
            flow = {k: w for k, w in net.flow.items() if not (set(k) & dead)}
            net = PetriNet(net.places, keep, flow, net.initial)
            rg = reachability_graph(net, RG_CAP)
        return net, rg


def test_criterion_01_fixture_fidelity():
    def check():
        t0 = time.perf_counter()
        rg = reachability_graph(fx("net21"))
        elapsed = time.perf_counter() - t0
        assert (len(rg.states), len(rg.arcs)) == (23, 41)
        assert rg.labels == {"a", "b", "c", "d", "e"}
        assert are_isomorphic(rg, fx("ts21")) is not None
        assert elapsed < FIDELITY_SECONDS, f"{elapsed:.3f}s"
        return f"{elapsed * 1000:.1f} ms"
    record(1, check)


def test_criterion_02_monolithic():
    def check():
        ts = fx("ts21")
        t0 = time.perf_counter()
        report = synthesize(ts)
        elapsed = time.perf_counter() - t0
        assert report.solved
        assert verify(report.net, ts)
        assert elapsed < MONO_SECONDS, f"{elapsed:.1f}s"
        return f"{len(report.net.places)} places, {elapsed * 1000:.0f} ms"
    record(2, check)


def test_criterion_03_product_pipeline():
    def check():
        t0 = time.perf_counter()
        grid = fx("grid6")
        parts = factor(grid)
        assert len(parts) == 2
        assert are_isomorphic(parts[0], fx("chain_a")) and are_isomorphic(parts[1], fx("chain_bb"))
        report = synthesize_factorized(grid)
        assert report.solved and verify(report.net, grid)
        rnd = random.Random(SEED)
        for _ in range(RANDOM_PAIRS):
            while True:
                a, b = random_net(rnd, "x"), random_net(rnd, "y")
                ra, rb = bounded(a, 16), bounded(b, 16)
                if ra is not None and rb is not None and min(len(ra.states), len(rb.states)) > 1:
                    break
            assert are_isomorphic(reachability_graph(disjoint_sum(a, b)), product(ra, rb)) is not None
        elapsed = time.perf_counter() - t0
        assert elapsed < PRODUCT_SECONDS, f"{elapsed:.1f}s"
        return f"{RANDOM_PAIRS} pairs, {elapsed:.2f} s"
    record(3, check)


def test_criterion_04_articulation_detection():
    def check():
        big = fx("bigfix")
        part = refine_partition(big)
        expected = {frozenset("ab"), frozenset("cde"), frozenset("f"), frozenset("gh"),
                    frozenset("ij"), frozenset("k")}
        assert set(part) == expected and len(part) == 6
        graph = build_graph(big, part)
        assert graph.is_acyclic()
        assert set(graph.state_nodes) == {"s1", "s3", "s2", "s7"}
        report = synthesize_articulated(big)
        assert report.solved and verify(report.net, big)
        return f"{report.components} components"
    record(4, check)


def test_criterion_05_adequacy():
    def check():
        aabb = fx("aabb")
        head = Lts.from_arcs("i", [("i", "a", "s1"), ("s1", "a", "s2")])
        tail = Lts.from_arcs("s2", [("s2", "b", "s3"), ("s3", "b", "s4")])
        forced = synthesize_adequate(head, "s2")
        assert forced.solved
        mm = marking_map(forced.net, head)
        assert not is_dominated(mm["s2"], [m for s, m in mm.items() if s != "s2"])
        right = synthesize(tail)
        assert right.solved
        net = articulate_pn(forced.net, mm["s2"], right.net)
        assert verify(net, aabb)
        return ""
    record(5, check)


def test_criterion_06_mixed_decomposition():
    def check():
        seq = fx("seqdiamond")
        tree = decompose(seq)
        assert are_isomorphic(evaluate(tree)[0], seq) is not None
        report = synthesize_mixed(seq)
        assert report.solved and verify(report.net, seq)
        return str(tree)
    record(6, check)


def test_criterion_07_rejection(tmp_path, capsys):
    def check():
        expected = {"diamond_nd_left": "backward-determinism",
                    "diamond_nd_right": "forward-determinism"}
        for stem, name in expected.items():
            assert presynthesis(fx(stem)) == name
            path = tmp_path / f"{stem}.lts"
            path.write_text(fixtures.text(f"{stem}.lts"))
            assert main(["synth", str(path)]) == 1
            assert f"Rejected: {name}" in capsys.readouterr().out
        return ""
    record(7, check)


def test_criterion_08_oracle_equivalence():
    def check():
        rnd = random.Random(SEED)
        t0 = time.perf_counter()
        sizes = []
        for _ in range(RANDOM_NETS):
            net, rg = live_sample(rnd)
            sizes.append(len(rg.states))
            mono = synthesize(rg)
            assert mono.solved, f"unsolved reachability graph of {net}"
            assert verify(mono.net, rg)
            mixed = synthesize_mixed(rg)
            assert mixed.outcome is mono.outcome
            assert verify(mixed.net, rg)
        elapsed = time.perf_counter() - t0
        assert elapsed < ORACLE_SECONDS, f"{elapsed:.1f}s"
        return (f"{RANDOM_NETS} nets, {min(sizes)}-{max(sizes)} states "
                f"(mean {statistics.mean(sizes):.1f}), {elapsed:.1f} s")
    record(8, check)


def test_criterion_09_size_laws():
    def check():
        ts = fx("ts21")
        assert len(generate(FamilySpec("star", ts, 10)).states) == 221
        for family in ("star", "daisy", "caterpillar"):
            for n in (1, 2, 4):
                spec = FamilySpec(family, ts, n)
                assert len(generate(spec).states) == 23 * n - n + 1 == expected_states(spec)
        for n in (1, 2, 3):
            assert len(generate(FamilySpec("product_power", fx("chain_bb"), n)).states) == 3 ** n
        assert predicted_gain("product", 2, 2, 100) == 50
        assert predicted_gain("articulation", 2, 2) == 2
        return ""
    record(9, check)


def _median_seconds(fn, lts, reps=3):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        report = fn(lts)
        times.append(time.perf_counter() - t0)
        assert report.solved and verify(report.net, lts)
    return statistics.median(times)


def test_criterion_10_relative_speed():
    def check():
        ts = fx("ts21")
        notes = []
        for n in (5, 10):
            cat = generate(FamilySpec("caterpillar", ts, n))
            mono = _median_seconds(synthesize, cat)
            mixed = _median_seconds(synthesize_mixed, cat)
            notes.append(f"n={n}: mixed {mixed:.2f}s vs mono {mono:.2f}s")
            if n == 5 and mixed > mono:
                notes.append("n=5 inverted on this machine (reported only)")
            if n == 10:
                assert mixed <= mono, "; ".join(notes)
        return "; ".join(notes)
    record(10, check)


def test_criterion_11_fits():
    def check():
        a, b = fit([(1, 2), (2, 16), (3, 54)], "power")
        assert a == pytest.approx(2, rel=FIT_RTOL) and b == pytest.approx(3, rel=FIT_RTOL)
        a, b = fit([(x, 0.9 * 1.01 ** x) for x in (10, 20, 30)], "exponential")
        assert a == pytest.approx(0.9, rel=FIT_RTOL) and b == pytest.approx(1.01, rel=FIT_RTOL)
        return ""
    record(11, check)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
