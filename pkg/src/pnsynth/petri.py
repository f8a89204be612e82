"""Weighted place/transition nets: firing, reachability graphs and net composition."""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Mapping

from .lts import Lts, fresh_name, rename_apart

Place = Hashable
Transition = str
Marking = dict

DEFAULT_MAX_STATES = 1_000_000


class NetError(Exception):
    pass


class UnknownTransition(NetError, KeyError):
    pass


class NotEnabled(NetError, ValueError):
    pass


class TransitionOverlap(NetError, ValueError):
    pass


class NotAdequate(NetError, ValueError):
    pass


class Unreachable(NetError, ValueError):
    pass


class ResourceError(NetError):
    """Exploration could not finish; the CLI maps these to exit code 3."""


class Unbounded(ResourceError):
    def __init__(self, ancestor, marking):
        super().__init__(f"marking {marking} strictly covers its ancestor {ancestor}")
        self.ancestor = ancestor
        self.marking = marking


class StateCapExceeded(ResourceError):
    def __init__(self, cap):
        super().__init__(f"more than {cap} reachable markings")
        self.cap = cap


class PetriNet:
    """Immutable P/T net.

    ``flow`` maps ``(place, transition)`` and ``(transition, place)`` pairs to
    weights; missing pairs weigh 0.  Places and transitions keep their
    declared order, which fixes the exploration order of reachability graphs.
    """

    __slots__ = ("places", "transitions", "flow", "initial", "_pindex", "_pre", "_post", "_m0")

    def __init__(self, places: Iterable[Place], transitions: Iterable[Transition],
                 flow: Mapping[tuple, int], initial: Mapping[Place, int]):
        places = tuple(dict.fromkeys(places))
        transitions = tuple(dict.fromkeys(transitions))
        pset, tset = set(places), set(transitions)
        if pset & tset:
            raise ValueError(f"names used for both places and transitions: {sorted(map(str, pset & tset))}")
        clean = {}
        for (x, y), w in flow.items():
            if w < 0:
                raise ValueError(f"negative weight on {x}->{y}")
            if not ((x in pset and y in tset) or (x in tset and y in pset)):
                raise ValueError(f"arc {x}->{y} does not join a place and a transition")
            if w:
                clean[(x, y)] = int(w)
        for p in initial:
            if p not in pset:
                raise ValueError(f"marking names unknown place {p!r}")
        m0 = tuple(int(initial.get(p, 0)) for p in places)
        if any(v < 0 for v in m0):
            raise ValueError("negative initial marking")
        pindex = {p: i for i, p in enumerate(places)}
        pre = {t: tuple(clean.get((p, t), 0) for p in places) for t in transitions}
        post = {t: tuple(clean.get((t, p), 0) for p in places) for t in transitions}
        for name, value in (("places", places), ("transitions", transitions), ("flow", clean),
                            ("initial", dict(zip(places, m0))), ("_pindex", pindex),
                            ("_pre", pre), ("_post", post), ("_m0", m0)):
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("PetriNet is immutable")

    def weight(self, x, y) -> int:
        return self.flow.get((x, y), 0)

    def as_vector(self, m: Mapping[Place, int]) -> tuple:
        return tuple(m.get(p, 0) for p in self.places)

    def as_marking(self, v: Iterable[int]) -> Marking:
        return dict(zip(self.places, v))

    def __eq__(self, other):
        if not isinstance(other, PetriNet):
            return NotImplemented
        return (set(self.places) == set(other.places) and set(self.transitions) == set(other.transitions)
                and self.flow == other.flow and self.initial == other.initial)

    def __hash__(self):
        return hash((frozenset(self.places), frozenset(self.transitions), frozenset(self.flow.items())))

    def __repr__(self):
        return f"PetriNet({len(self.places)} places, {len(self.transitions)} transitions)"


def _check_transition(net: PetriNet, t):
    if t not in net._pre:
        raise UnknownTransition(t)


def enabled(net: PetriNet, m: Mapping[Place, int], t: Transition) -> bool:
    _check_transition(net, t)
    return all(m.get(p, 0) >= w for p, w in zip(net.places, net._pre[t]))


def fire(net: PetriNet, m: Mapping[Place, int], t: Transition) -> Marking:
    if not enabled(net, m, t):
        raise NotEnabled(t)
    return {p: m.get(p, 0) - a + b for p, a, b in zip(net.places, net._pre[t], net._post[t])}


def incidence(net: PetriNet) -> dict:
    return {(p, t): net.weight(t, p) - net.weight(p, t) for p in net.places for t in net.transitions}


def is_dominated(m: Mapping, others: Iterable[Mapping]) -> bool:
    """True iff some marking in ``others`` is componentwise >= m and differs from it."""
    keys = set(m)
    for o in others:
        ks = keys | set(o)
        if all(m.get(k, 0) <= o.get(k, 0) for k in ks) and any(m.get(k, 0) != o.get(k, 0) for k in ks):
            return True
    return False


class ReachabilityGraph(Lts):
    """An Lts whose states "m0", "m1", ... remember the marking they stand for."""

    __slots__ = ("net", "vectors")

    def marking(self, state) -> Marking:
        return self.net.as_marking(self.vectors[state])

    def markings(self) -> dict:
        return {s: self.marking(s) for s in self.states}


def _covers_strictly(big, small) -> bool:
    return big != small and all(x >= y for x, y in zip(big, small))


def reachability_graph(net: PetriNet, max_states: int = DEFAULT_MAX_STATES) -> ReachabilityGraph:
    """Breadth-first marking graph, transitions tried in declared order."""
    trans = [(t, net._pre[t], net._post[t]) for t in net.transitions]
    m0 = net._m0
    ids = {m0: 0}
    parent = [None]
    vectors = [m0]
    arcs = []
    queue = deque([m0])
    while queue:
        m = queue.popleft()
        i = ids[m]
        for t, pre, post in trans:
            if any(x < w for x, w in zip(m, pre)):
                continue
            m2 = tuple(x - a + b for x, a, b in zip(m, pre, post))
            j = ids.get(m2)
            if j is None:
                k = i
                while k is not None:
                    if _covers_strictly(m2, vectors[k]):
                        raise Unbounded(net.as_marking(vectors[k]), net.as_marking(m2))
                    k = parent[k]
                j = len(vectors)
                if j >= max_states:
                    raise StateCapExceeded(max_states)
                ids[m2] = j
                parent.append(i)
                vectors.append(m2)
                queue.append(m2)
            arcs.append((f"m{i}", t, f"m{j}"))
    names = [f"m{i}" for i in range(len(vectors))]
    rg = ReachabilityGraph(names, net.transitions, arcs, "m0")
    object.__setattr__(rg, "net", net)
    object.__setattr__(rg, "vectors", dict(zip(names, vectors)))
    return rg


def k_bound(net: PetriNet, max_states: int = DEFAULT_MAX_STATES) -> int:
    rg = reachability_graph(net, max_states)
    return max((max(v) for v in rg.vectors.values() if v), default=0)


def empty_net() -> PetriNet:
    return PetriNet((), (), {}, {})


def _renamed(net: PetriNet, rename: Mapping) -> tuple[list, dict, dict]:
    places = [rename.get(p, p) for p in net.places]
    flow = {(rename.get(x, x), rename.get(y, y)): w for (x, y), w in net.flow.items()}
    init = {rename.get(p, p): v for p, v in net.initial.items()}
    return places, flow, init


def disjoint_sum_with_map(a: PetriNet, b: PetriNet) -> tuple[PetriNet, dict]:
    common = set(a.transitions) & set(b.transitions)
    if common:
        raise TransitionOverlap(f"shared transitions: {sorted(common)}")
    taken = set(a.places) | set(a.transitions) | set(b.transitions)
    rename = rename_apart(b.places, taken)
    places, flow, init = _renamed(b, rename)
    net = PetriNet(list(a.places) + places, list(a.transitions) + list(b.transitions),
                   {**a.flow, **flow}, {**a.initial, **init})
    return net, rename


def disjoint_sum(a: PetriNet, b: PetriNet) -> PetriNet:
    """Side-by-side union; b's places are renamed when they clash."""
    return disjoint_sum_with_map(a, b)[0]


def articulate_pn_with_map(a: PetriNet, m: Mapping, b: PetriNet,
                           reachable: Iterable[Mapping] | None = None) -> tuple[PetriNet, dict]:
    mvec = a.as_vector(m)
    if reachable is None:
        vecs = list(reachability_graph(a).vectors.values())
    else:
        vecs = [a.as_vector(x) for x in reachable]
    if mvec not in vecs:
        raise Unreachable(f"marking {dict(m)} is not reachable")
    if any(_covers_strictly(v, mvec) for v in vecs):
        raise NotAdequate(f"marking {dict(m)} is dominated by another reachable marking")
    net, rename = disjoint_sum_with_map(a, b)
    flow = dict(net.flow)
    b0 = {rename.get(p, p): v for p, v in b.initial.items() if v > 0}
    for t1 in a.transitions:
        if all(x >= w for x, w in zip(mvec, a._pre[t1])):
            for p2, w in b0.items():
                flow[(p2, t1)] = w
                flow[(t1, p2)] = w
    marked = {p: v for p, v in zip(a.places, mvec) if v > 0}
    for t2 in b.transitions:
        if all(x >= w for x, w in zip(b._m0, b._pre[t2])):
            for p1, w in marked.items():
                flow[(p1, t2)] = w
                flow[(t2, p1)] = w
    return PetriNet(net.places, net.transitions, flow, net.initial), rename


def articulate_pn(a: PetriNet, m: Mapping, b: PetriNet,
                  reachable: Iterable[Mapping] | None = None) -> PetriNet:
    """Compose two nets so that b may only run while a sits at marking ``m``.

    ``reachable`` may list a's reachable markings to skip recomputing them.
    """
    return articulate_pn_with_map(a, m, b, reachable)[0]


def add_complement_places(net: PetriNet, rg: Lts | None = None) -> PetriNet:
    """Add a mirror place for every place so no reachable marking dominates another."""
    if not isinstance(rg, ReachabilityGraph) or rg.net != net:
        rg = reachability_graph(net)
    vecs = list(rg.vectors.values())
    taken = set(net.places) | set(net.transitions)
    places = list(net.places)
    flow = dict(net.flow)
    init = dict(net.initial)
    for i, p in enumerate(net.places):
        bound = max(v[i] for v in vecs)
        name = f"{p}_c" if f"{p}_c" not in taken else fresh_name(f"{p}_c", taken)
        taken.add(name)
        places.append(name)
        extra = 0
        for t in net.transitions:
            if net.weight(p, t):
                flow[(t, name)] = net.weight(p, t)
            if net.weight(t, p):
                flow[(name, t)] = net.weight(t, p)
                extra = max(extra, net.weight(t, p))
        init[name] = bound - net.initial[p] + extra
    return PetriNet(places, net.transitions, flow, init)
