"""Finite labelled transition systems and their composition operators."""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

State = Hashable
Label = str
Arc = tuple  # (source, label, target)


class LtsError(Exception):
    pass


class LabelOverlap(LtsError, ValueError):
    pass


class UnknownState(LtsError, KeyError):
    def __str__(self):
        return f"unknown state {self.args[0]!r}"


class UnsupportedInput(LtsError, ValueError):
    pass


class Lts:
    """An immutable labelled transition system with an initial state.

    ``states`` keeps the order in which states were supplied; that order is
    what every other module calls the discovery order.  Arcs are indexed by
    source and by target so that both directions are cheap to follow.
    """

    __slots__ = ("states", "labels", "arcs", "initial", "_index", "_out", "_in")

    def __init__(self, states: Iterable[State], labels: Iterable[Label],
                 arcs: Iterable[Arc], initial: State):
        states = tuple(dict.fromkeys(states))
        labels = frozenset(labels)
        arcs = frozenset(tuple(a) for a in arcs)
        index = {s: i for i, s in enumerate(states)}
        if initial not in index:
            raise UnknownState(initial)
        out: dict = {s: {} for s in states}
        inc: dict = {s: {} for s in states}
        for arc in arcs:
            src, lab, dst = arc
            if src not in index:
                raise UnknownState(src)
            if dst not in index:
                raise UnknownState(dst)
            if lab not in labels:
                raise ValueError(f"arc label {lab!r} is not declared")
            out[src].setdefault(lab, []).append(dst)
            inc[dst].setdefault(lab, []).append(src)
        # keep successor lists in a reproducible order
        for table in (out, inc):
            for row in table.values():
                for lab, lst in row.items():
                    lst.sort(key=index.__getitem__)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", inc)

    def __setattr__(self, name, value):
        raise AttributeError("Lts is immutable")

    @classmethod
    def from_arcs(cls, initial: State, arcs: Iterable[Arc],
                  states: Iterable[State] = (), labels: Iterable[Label] = ()) -> "Lts":
        """Build an Lts, collecting states in order of first mention."""
        arcs = [tuple(a) for a in arcs]
        order = list(states) + [initial]
        for src, _, dst in arcs:
            order.append(src)
            order.append(dst)
        labs = set(labels) | {a[1] for a in arcs}
        return cls(order, labs, arcs, initial)

    # -- queries ---------------------------------------------------------

    def index(self, s: State) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise UnknownState(s) from None

    def __contains__(self, s) -> bool:
        try:
            return s in self._index
        except TypeError:
            return False

    def successors(self, s: State, label: Label) -> Sequence[State]:
        return self._out[s].get(label, ())

    def predecessors(self, s: State, label: Label) -> Sequence[State]:
        return self._in[s].get(label, ())

    def out_arcs(self, s: State) -> Iterator[tuple[Label, State]]:
        for lab, targets in self._out[s].items():
            for t in targets:
                yield lab, t

    def in_arcs(self, s: State) -> Iterator[tuple[Label, State]]:
        for lab, sources in self._in[s].items():
            for t in sources:
                yield lab, t

    def enabled(self, s: State) -> frozenset:
        return frozenset(self._out[s])

    def step(self, s: State, label: Label) -> State | None:
        """Target of the unique ``label`` arc leaving ``s`` (deterministic use)."""
        targets = self._out[s].get(label)
        return targets[0] if targets else None

    def sorted_labels(self) -> list[Label]:
        return sorted(self.labels)

    def sorted_arcs(self) -> list[Arc]:
        ix = self._index
        return sorted(self.arcs, key=lambda a: (ix[a[0]], a[1], ix[a[2]]))

    def with_initial(self, s: State) -> "Lts":
        if s not in self._index:
            raise UnknownState(s)
        return Lts(self.states, self.labels, self.arcs, s)

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Lts):
            return NotImplemented
        return (self.initial == other.initial and self.labels == other.labels
                and self.arcs == other.arcs and set(self.states) == set(other.states))

    def __hash__(self):
        return hash((self.initial, self.labels, self.arcs, frozenset(self.states)))

    def __repr__(self):
        return (f"Lts({len(self.states)} states, {len(self.arcs)} arcs, "
                f"labels={sorted(self.labels)}, initial={self.initial!r})")


def single_state(labels: Iterable[Label] = (), loops: bool = False, name: State = "i") -> Lts:
    """One state; with ``loops`` every label is a self-loop on it."""
    labels = frozenset(labels)
    arcs = [(name, a, name) for a in labels] if loops else []
    return Lts([name], labels, arcs, name)


def is_deterministic(lts: Lts) -> bool:
    for s in lts.states:
        if any(len(v) > 1 for v in lts._out[s].values()):
            return False
        if any(len(v) > 1 for v in lts._in[s].values()):
            return False
    return True


def is_forward_deterministic(lts: Lts) -> bool:
    return all(len(v) <= 1 for s in lts.states for v in lts._out[s].values())


def is_backward_deterministic(lts: Lts) -> bool:
    return all(len(v) <= 1 for s in lts.states for v in lts._in[s].values())


def reachable(lts: Lts, start: State, labels: Iterable[Label] | None = None,
              directed: bool = True) -> list[State]:
    """States reachable from ``start`` through arcs labelled in ``labels``.

    With ``directed=False`` arcs are followed backwards as well.  The
    result is in breadth-first order and always starts with ``start``.
    """
    if start not in lts:
        raise UnknownState(start)
    allowed = lts.labels if labels is None else frozenset(labels)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        s = queue.popleft()
        nbrs = [t for lab, t in lts.out_arcs(s) if lab in allowed]
        if not directed:
            nbrs += [t for lab, t in lts.in_arcs(s) if lab in allowed]
        for t in nbrs:
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order


def is_totally_reachable(lts: Lts) -> bool:
    return len(reachable(lts, lts.initial)) == len(lts.states)


def restrict(lts: Lts, labels: Iterable[Label], directed: bool = True) -> Lts:
    labels = frozenset(labels)
    keep = reachable(lts, lts.initial, labels, directed)
    kept = set(keep)
    arcs = [a for a in lts.arcs if a[1] in labels and a[0] in kept and a[2] in kept]
    return Lts(keep, labels, arcs, lts.initial)


def useful_labels(lts: Lts) -> frozenset:
    return frozenset(a[1] for a in lts.arcs)


def adjacency(lts: Lts, labels: Iterable[Label]) -> frozenset:
    labels = frozenset(labels)
    adj = set()
    for s, a, t in lts.arcs:
        if a in labels:
            adj.add(s)
            adj.add(t)
    return frozenset(adj) if adj else frozenset([lts.initial])


def parikh(word: Iterable, labels: Iterable[Label] = ()) -> dict[Label, int]:
    """Signed label counts of a general word.

    Word items are either a bare label (forward) or a ``(label, direction)``
    pair with direction +1 or -1.
    """
    counts = {a: 0 for a in labels}
    for item in word:
        if isinstance(item, str):
            lab, sign = item, 1
        else:
            lab, sign = item
        counts[lab] = counts.get(lab, 0) + (1 if sign > 0 else -1)
    return counts


def reverse_word(word: Sequence) -> list:
    """The general word that walks ``word`` backwards."""
    out = []
    for item in reversed(word):
        lab, sign = (item, 1) if isinstance(item, str) else item
        out.append((lab, -sign))
    return out


# -- composition ---------------------------------------------------------

def _check_disjoint(a: Lts, b: Lts):
    common = a.labels & b.labels
    if common:
        raise LabelOverlap(f"shared labels: {sorted(common)}")


def product(a: Lts, b: Lts) -> Lts:
    return product_many([a, b])


def product_many(parts: Sequence[Lts]) -> Lts:
    """Disjoint product of several systems; states are flat tuples."""
    parts = list(parts)
    if not parts:
        return single_state(name=())
    seen: set = set()
    for p in parts:
        if p.labels & seen:
            raise LabelOverlap(f"shared labels: {sorted(p.labels & seen)}")
        seen |= p.labels
    states: list = [()]
    for p in parts:
        states = [st + (s,) for st in states for s in p.states]
    arcs = []
    for k, p in enumerate(parts):
        others = [q.states for q in parts]
        for src, lab, dst in p.arcs:
            prefix: list = [()]
            for j, q in enumerate(parts):
                if j == k:
                    prefix = [st + (None,) for st in prefix]
                else:
                    prefix = [st + (s,) for st in prefix for s in others[j]]
            for st in prefix:
                arcs.append((st[:k] + (src,) + st[k + 1:], lab, st[:k] + (dst,) + st[k + 1:]))
    initial = tuple(p.initial for p in parts)
    return Lts(states, seen, arcs, initial)


def _token(x) -> str:
    if isinstance(x, tuple):
        return "_".join(_token(y) for y in x)
    return str(x)


def fresh_name(base, taken) -> str:
    """``base`` with the lowest numeric suffix that is not in ``taken``."""
    stem = _token(base)
    k = 1
    while f"{stem}__{k}" in taken:
        k += 1
    return f"{stem}__{k}"


def rename_apart(names: Iterable, taken: Iterable, keep: Mapping = None) -> dict:
    """Map each of ``names`` to itself or to a fresh name avoiding ``taken``.

    ``keep`` pins some names to a given image (used for the glued state).
    """
    keep = dict(keep or {})
    used = set(taken) | set(keep.values())
    out = {}
    for n in names:
        if n in keep:
            out[n] = keep[n]
        elif n in used:
            new = fresh_name(n, used)
            used.add(new)
            out[n] = new
        else:
            used.add(n)
            out[n] = n
    return out


def articulate_with_map(a: Lts, s: State, b: Lts) -> tuple[Lts, dict]:
    """Like :func:`articulate_lts` but also return how b's states were renamed."""
    _check_disjoint(a, b)
    if s not in a:
        raise UnknownState(s)
    rename = rename_apart(b.states, a.states, keep={b.initial: s})
    states = list(a.states) + [rename[x] for x in b.states if x != b.initial]
    arcs = list(a.arcs) + [(rename[x], lab, rename[y]) for x, lab, y in b.arcs]
    return Lts(states, a.labels | b.labels, arcs, a.initial), rename


def articulate_lts(a: Lts, s: State, b: Lts) -> Lts:
    """Glue the initial state of ``b`` onto state ``s`` of ``a``."""
    return articulate_with_map(a, s, b)[0]


# -- isomorphism ---------------------------------------------------------

def are_isomorphic(a: Lts, b: Lts) -> dict | None:
    """Label-preserving bijection from a's states to b's, or None.

    Both inputs must be deterministic and totally reachable; the bijection
    is then unique and found by walking both systems in lockstep.
    """
    for x in (a, b):
        if not is_deterministic(x) or not is_totally_reachable(x):
            raise UnsupportedInput("isomorphism is only decided for deterministic, "
                                   "totally reachable systems")
    if a.labels != b.labels or len(a.states) != len(b.states) or len(a.arcs) != len(b.arcs):
        return None
    fwd = {a.initial: b.initial}
    bwd = {b.initial: a.initial}
    queue = deque([a.initial])
    while queue:
        x = queue.popleft()
        y = fwd[x]
        ox, oy = a._out[x], b._out[y]
        if ox.keys() != oy.keys():
            return None
        for lab, (tx,) in ox.items():
            (ty,) = oy[lab]
            if tx in fwd:
                if fwd[tx] != ty:
                    return None
            elif ty in bwd:
                return None
            else:
                fwd[tx] = ty
                bwd[ty] = tx
                queue.append(tx)
    return fwd if len(fwd) == len(a.states) else None


def shortest_paths(lts: Lts) -> dict:
    """A breadth-first label path from the initial state to every reachable state."""
    paths = {lts.initial: ()}
    queue = deque([lts.initial])
    while queue:
        s = queue.popleft()
        for lab, t in lts.out_arcs(s):
            if t not in paths:
                paths[t] = paths[s] + (lab,)
                queue.append(t)
    return paths


def run(lts: Lts, word: Iterable[Label], start: State | None = None) -> State | None:
    """Follow a forward word deterministically; None if it gets stuck."""
    s = lts.initial if start is None else start
    for lab in word:
        s = lts.step(s, lab)
        if s is None:
            return None
    return s


def self_loop_labels(lts: Lts) -> frozenset:
    return frozenset(a for s, a, t in lts.arcs if s == t)
