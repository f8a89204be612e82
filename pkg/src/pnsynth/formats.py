"""Plain-text formats for transition systems (.lts) and nets (.pn).

An .lts file::

    states i s1 s2        # optional
    labels a b            # optional, to declare labels that never occur
    initial i
    arc i b s1

A .pn file::

    place p 1
    trans a
    arc p a 2             # place -> transition, weight 2
    arc a p               # transition -> place, weight 1

Blank lines and ``#`` comments are ignored.  Names match ``[A-Za-z0-9_]+``;
a leading ``__`` is reserved for names the tool generates itself.
"""

from __future__ import annotations

import re

from .lts import Lts, _token
from .petri import PetriNet

_TOKEN = re.compile(r"[A-Za-z0-9_]+\Z")


class FormatError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SyntaxError(FormatError):  # noqa: A001 - mirrors the format's error vocabulary
    pass


class DuplicateArc(FormatError):
    pass


class ReservedName(FormatError):
    pass


class DuplicateName(FormatError):
    pass


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _name(tok: str, no: int) -> str:
    if not _TOKEN.match(tok):
        raise SyntaxError(no, f"bad name {tok!r}")
    if tok.startswith("__"):
        raise ReservedName(no, f"names starting with '__' are reserved: {tok!r}")
    return tok


def parse_lts(text: str) -> Lts:
    states: list = []
    labels: list = []
    arcs: list = []
    seen: set = set()
    initial = None
    for no, words in _lines(text):
        key, args = words[0], words[1:]
        if key == "states":
            states.extend(_name(t, no) for t in args)
        elif key == "labels":
            labels.extend(_name(t, no) for t in args)
        elif key == "initial":
            if len(args) != 1:
                raise SyntaxError(no, "expected: initial STATE")
            if initial is not None:
                raise SyntaxError(no, "initial state given twice")
            initial = _name(args[0], no)
        elif key == "arc":
            if len(args) != 3:
                raise SyntaxError(no, "expected: arc SOURCE LABEL TARGET")
            arc = tuple(_name(t, no) for t in args)
            if arc in seen:
                raise DuplicateArc(no, f"arc {' '.join(arc)} repeated")
            seen.add(arc)
            arcs.append(arc)
        else:
            raise SyntaxError(no, f"unknown keyword {key!r}")
    if initial is None:
        raise SyntaxError(0, "missing 'initial' line")
    return Lts.from_arcs(initial, arcs, states=states, labels=labels)


def _names(states) -> dict:
    names = {s: _token(s) for s in states}
    if len(set(names.values())) != len(names) or not all(_TOKEN.match(n) for n in names.values()):
        names = {s: f"s{i}" for i, s in enumerate(states)}
    return names


def emit_lts(lts: Lts) -> str:
    """Canonical text: states in discovery order, arcs by (source, label, target)."""
    names = _names(lts.states)
    out = ["states " + " ".join(names[s] for s in lts.states)]
    unused = sorted(lts.labels - {a for _, a, _ in lts.arcs})
    if unused:
        out.append("labels " + " ".join(unused))
    out.append(f"initial {names[lts.initial]}")
    for s, a, t in lts.sorted_arcs():
        out.append(f"arc {names[s]} {a} {names[t]}")
    return "\n".join(out) + "\n"


def parse_pn(text: str) -> PetriNet:
    places: list = []
    transitions: list = []
    marking: dict = {}
    flow: dict = {}
    kinds: dict = {}
    pending = []
    for no, words in _lines(text):
        key, args = words[0], words[1:]
        if key == "place":
            if len(args) not in (1, 2):
                raise SyntaxError(no, "expected: place NAME [TOKENS]")
            name = _name(args[0], no)
            if name in kinds:
                raise DuplicateName(no, f"{name} declared twice")
            tokens = _int(args[1], no) if len(args) == 2 else 0
            if tokens < 0:
                raise SyntaxError(no, "token count must be >= 0")
            kinds[name] = "place"
            places.append(name)
            marking[name] = tokens
        elif key == "trans":
            if len(args) != 1:
                raise SyntaxError(no, "expected: trans NAME")
            name = _name(args[0], no)
            if name in kinds:
                raise DuplicateName(no, f"{name} declared twice")
            kinds[name] = "trans"
            transitions.append(name)
        elif key == "arc":
            if len(args) not in (2, 3):
                raise SyntaxError(no, "expected: arc FROM TO [WEIGHT]")
            weight = _int(args[2], no) if len(args) == 3 else 1
            if weight < 1:
                raise SyntaxError(no, "arc weight must be >= 1")
            pending.append((no, _name(args[0], no), _name(args[1], no), weight))
        else:
            raise SyntaxError(no, f"unknown keyword {key!r}")
    for no, x, y, w in pending:
        kx, ky = kinds.get(x), kinds.get(y)
        if kx is None or ky is None:
            raise SyntaxError(no, f"undeclared arc endpoint {x if kx is None else y}")
        if kx == ky:
            raise SyntaxError(no, "an arc must join a place and a transition")
        if (x, y) in flow:
            raise DuplicateArc(no, f"arc {x} {y} repeated")
        flow[(x, y)] = w
    return PetriNet(places, transitions, flow, marking)


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise SyntaxError(no, f"expected an integer, got {tok!r}") from None


def emit_pn(net: PetriNet) -> str:
    """Canonical text: places, then transitions, then arcs, each sorted by name."""
    pname = {p: _token(p) for p in net.places}
    out = [f"place {pname[p]} {net.initial[p]}" for p in sorted(net.places, key=pname.get)]
    out += [f"trans {t}" for t in sorted(net.transitions)]
    arcs = []
    for (x, y), w in net.flow.items():
        a, b = pname.get(x, x), pname.get(y, y)
        arcs.append((a, b, w))
    for a, b, w in sorted(arcs):
        out.append(f"arc {a} {b}" + (f" {w}" if w != 1 else ""))
    return "\n".join(out) + "\n"
