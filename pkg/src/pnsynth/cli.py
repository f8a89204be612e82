"""Command line entry point.

Exit codes: 0 success, 1 unsolvable / rejected / no decomposition found,
2 bad input, 3 exploration limits hit (unbounded net, state cap).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as benchmod
from .articulation import articul_expression, component_lts
from .decompose import decompose, synthesize_mixed
from .factorization import NotAProduct, factor, synthesize_factorized
from .formats import FormatError, emit_lts, emit_pn, parse_lts, parse_pn
from .lts import Lts, LtsError, restrict, useful_labels
from .articulation import synthesize_articulated
from .petri import DEFAULT_MAX_STATES, ResourceError, reachability_graph
from .synthesis import Outcome, presynthesis, synthesize, verify

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

STRATEGY_FUNCS = {
    "mono": synthesize,
    "factor": synthesize_factorized,
    "artic": synthesize_articulated,
    "mixed": synthesize_mixed,
}


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror}") from None


def load_lts(path: str, strip_useless: bool = False) -> Lts:
    lts = parse_lts(_read(path))
    if strip_useless:
        used = useful_labels(lts)
        if used != lts.labels:
            lts = Lts(lts.states, used, lts.arcs, lts.initial)
    return lts


def _rejected(check: str) -> int:
    print(f"Rejected: {check}")
    return EXIT_FAIL


def cmd_synth(args) -> int:
    lts = load_lts(args.input, args.strip_useless)
    report = STRATEGY_FUNCS[args.strategy](lts)
    print(report.summary())
    if report.outcome is Outcome.REJECTED:
        return EXIT_FAIL
    if report.outcome is Outcome.UNSOLVABLE:
        print(f"witness: {report.witness}")
        return EXIT_FAIL
    if args.verify:
        ok = verify(report.net, lts, args.max_states)
        print("verified: yes" if ok else "verified: NO")
        if not ok:
            return EXIT_FAIL
    text = emit_pn(report.net)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_decompose(args) -> int:
    lts = load_lts(args.input, args.strip_useless)
    failed = presynthesis(lts)
    if failed:
        return _rejected(failed)
    print(decompose(lts, prefer_product=not args.articulation_first))
    return EXIT_OK


def _emit_all(directory: str | None, stem: str, parts: list[Lts]):
    if not directory:
        return
    d = Path(directory)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise InputError(f"cannot create {d}: {e.strerror}") from None
    for i, part in enumerate(parts, 1):
        _write(str(d / f"{stem}{i}.lts"), emit_lts(part))


def cmd_factorize(args) -> int:
    lts = load_lts(args.input, args.strip_useless)
    failed = presynthesis(lts)
    if failed:
        return _rejected(failed)
    try:
        factors = factor(lts)
    except NotAProduct as e:
        print(f"NotAProduct: {e.witness}")
        return EXIT_FAIL
    if len(factors) == 1:
        print("NotAProduct: a single label class")
        return EXIT_FAIL
    for i, f in enumerate(factors, 1):
        print(f"factor{i}: labels {{{','.join(sorted(f.labels))}}}, {len(f.states)} states")
    _emit_all(args.emit_dir, "factor", factors)
    return EXIT_OK


def _components(lts: Lts, expr) -> list[Lts]:
    from .articulation import Component
    if isinstance(expr, Component):
        return [component_lts(lts, expr.labels, expr.root)]
    return _components(lts, expr.left) + _components(lts, expr.right)


def cmd_articulate(args) -> int:
    lts = load_lts(args.input, args.strip_useless)
    failed = presynthesis(lts)
    if failed:
        return _rejected(failed)
    expr = articul_expression(lts)
    if expr is None:
        print("NoArticulation")
        return EXIT_FAIL
    print(expr)
    parts = _components(lts, expr)
    for i, p in enumerate(parts, 1):
        print(f"component{i}: labels {{{','.join(sorted(p.labels))}}}, root {p.initial}, "
              f"{len(p.states)} states")
    _emit_all(args.emit_dir, "component", parts)
    return EXIT_OK


def cmd_rg(args) -> int:
    net = parse_pn(_read(args.input))
    rg = reachability_graph(net, args.max_states)
    text = emit_lts(rg)
    if args.output:
        _write(args.output, text)
        print(f"{len(rg.states)} states, {len(rg.arcs)} arcs")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    component = load_lts(args.component)
    failed = presynthesis(component)
    if failed:
        return _rejected(failed)
    if args.strategies:
        strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
        bad = [s for s in strategies if s not in benchmod.STRATEGIES]
        if bad:
            raise InputError(f"unknown strategies: {', '.join(bad)}")
    elif args.family == "product_power":
        strategies = ["mono", "factor", "mixed", "per-component-sum"]
    else:
        strategies = ["mono", "artic", "mixed", "per-component-sum"]
    attach = tuple(args.attach.split(",")) if args.attach else None
    if attach:
        for s in attach:
            if s not in component:
                raise InputError(f"unknown anchor state {s}")
    spec = benchmod.FamilySpec(args.family, component, args.max_n, attach)
    records = benchmod.run_bench(spec, strategies, args.reps)
    benchmod.write_csv(records, args.csv)
    for r in records:
        print(f"n={r.n:<3} states={r.states:<6} {r.strategy:<18} {r.elapsed_ms:10.1f} ms "
              f"verified={'yes' if r.verified else 'NO'}")
    return EXIT_OK if all(r.verified for r in records) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pnsynth", description="Petri net synthesis from transition systems")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="synthesize a net from an .lts file")
    s.add_argument("input")
    s.add_argument("-o", "--output")
    s.add_argument("--strategy", choices=sorted(STRATEGY_FUNCS), default="mono")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    s.add_argument("--strip-useless", action="store_true", help="drop labels that occur on no arc")
    s.set_defaults(func=cmd_synth)

    for name, func, helptext in (("decompose", cmd_decompose, "print the decomposition tree"),
                                 ("factorize", cmd_factorize, "split into product factors"),
                                 ("articulate", cmd_articulate, "split at articulation states")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("input")
        s.add_argument("--strip-useless", action="store_true")
        if name == "decompose":
            s.add_argument("--articulation-first", action="store_true")
        else:
            s.add_argument("--emit-dir")
        s.set_defaults(func=func)

    s = sub.add_parser("rg", help="reachability graph of a .pn file")
    s.add_argument("input")
    s.add_argument("-o", "--output")
    s.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    s.set_defaults(func=cmd_rg)

    s = sub.add_parser("bench", help="time strategies on a generated family")
    s.add_argument("--family", choices=benchmod.FAMILIES, required=True)
    s.add_argument("--component", required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--reps", type=int, default=3)
    s.add_argument("--csv", required=True)
    s.add_argument("--strategies", help="comma separated subset of " + ",".join(benchmod.STRATEGIES))
    s.add_argument("--attach", help="comma separated anchor states of the component")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    for opt in ("max_states", "max_n", "reps"):
        if getattr(args, opt, 1) < 1:
            print(f"error: --{opt.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (FormatError, InputError, LtsError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
