"""Finite event structures, configurations, maps and grounded causal chains.

Event ids are hashable values: plain ints for hand-written structures,
nested tuples for constructed ones (tensor tags, copy indices, ...).
Everything is ordered with :func:`gamecollapse.util.skey` so enumeration
order is reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Iterator, Mapping

import networkx as nx

from .util import Report, ValidationError, skey, ssorted

Event = Hashable
Config = frozenset

POLARITIES = ("+", "-", ".")


def _closure_below(events: tuple, preds: dict) -> dict:
    """Strict down-sets from immediate predecessors; raises on cycles."""
    below: dict = {}
    state: dict = {}

    for root in events:
        if root in below:
            continue
        stack = [(root, iter(preds[root]))]
        state[root] = 1
        while stack:
            e, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                acc = set()
                for p in preds[e]:
                    acc.add(p)
                    acc |= below[p]
                below[e] = frozenset(acc)
                state[e] = 2
                stack.pop()
                continue
            st = state.get(nxt, 0)
            if st == 1:
                raise ValidationError(f"causality has a cycle through {nxt!r}")
            if st == 0:
                state[nxt] = 1
                stack.append((nxt, iter(preds[nxt])))
    return below


@dataclass(frozen=True, eq=False)
class EventStructure:
    """Events with causal order (kept as its cover relation) and conflict.

    Build instances with :meth:`build`; it accepts any generating causal
    pairs and conflict pairs, computes the transitive reduction, the
    inherited conflict and checks that the result is an event structure.
    """

    events: tuple
    cover: frozenset
    conflict: frozenset
    polarity: Mapping[Event, str]
    _below: dict = field(repr=False, default_factory=dict)
    _preds: dict = field(repr=False, default_factory=dict)
    _succs: dict = field(repr=False, default_factory=dict)
    _conf: dict = field(repr=False, default_factory=dict)
    _cache: dict = field(repr=False, default_factory=dict)

    @classmethod
    def build(
        cls,
        events: Iterable[Event],
        causes: Iterable[tuple] = (),
        conflicts: Iterable[tuple] = (),
        polarity: Mapping[Event, str] | None = None,
    ) -> "EventStructure":
        evs = tuple(ssorted(set(events)))
        evset = set(evs)
        pol = {e: (polarity or {}).get(e, ".") for e in evs}
        for e, p in pol.items():
            if p not in POLARITIES:
                raise ValidationError(f"bad polarity {p!r} on {e!r}")
        gen_preds: dict = {e: set() for e in evs}
        for a, b in causes:
            if a not in evset or b not in evset:
                raise ValidationError(f"cause {a!r} {b!r} mentions an unknown event")
            if a == b:
                continue
            gen_preds[b].add(a)
        below = _closure_below(evs, gen_preds)
        # transitive reduction: p is an immediate cause of e unless p is below another cause
        preds = {}
        for e in evs:
            bel = below[e]
            preds[e] = frozenset(p for p in bel if not any(p in below[q] for q in bel if q != p))
        succs: dict = {e: set() for e in evs}
        for e in evs:
            for p in preds[e]:
                succs[p].add(e)
        above = {e: {e} for e in evs}
        for e in evs:
            for p in below[e]:
                above[p].add(e)
        conf: dict = {e: set() for e in evs}
        for a, b in conflicts:
            if a not in evset or b not in evset:
                raise ValidationError(f"conflict {a!r} {b!r} mentions an unknown event")
            for x in above[a]:
                for y in above[b]:
                    conf[x].add(y)
                    conf[y].add(x)
        for e in evs:
            if e in conf[e]:
                raise ValidationError(f"event {e!r} is in conflict with itself")
        cover = frozenset((p, e) for e in evs for p in preds[e])
        allconf = frozenset(frozenset((a, b)) for a in evs for b in conf[a])
        return cls(
            events=evs,
            cover=cover,
            conflict=allconf,
            polarity=pol,
            _below=below,
            _preds=preds,
            _succs={e: frozenset(s) for e, s in succs.items()},
            _conf={e: frozenset(c) for e, c in conf.items()},
        )

    # -- basic relations -------------------------------------------------

    def __len__(self) -> int:
        return len(self.events)

    def __contains__(self, e: Event) -> bool:
        return e in self._below

    def below(self, e: Event) -> frozenset:
        """Strict causes of ``e``."""
        return self._below[e]

    def down(self, e: Event) -> frozenset:
        """The principal configuration ``[e]``."""
        return self._below[e] | {e}

    def leq(self, a: Event, b: Event) -> bool:
        return a == b or a in self._below[b]

    def preds(self, e: Event) -> frozenset:
        return self._preds[e]

    def succs(self, e: Event) -> frozenset:
        return self._succs[e]

    def conflicts_with(self, e: Event) -> frozenset:
        return self._conf[e]

    def in_conflict(self, a: Event, b: Event) -> bool:
        return b in self._conf[a]

    def pol(self, e: Event) -> str:
        return self.polarity[e]

    def minimal_events(self) -> list:
        return [e for e in self.events if not self._preds[e]]

    def minimal_conflicts(self) -> list[tuple]:
        """Immediate conflicts, i.e. the generating pairs of ``#``."""
        out = []
        for pair in self.conflict:
            a, b = ssorted(pair)
            if any(p in self._conf[b] for p in self._preds[a]):
                continue
            if any(p in self._conf[a] for p in self._preds[b]):
                continue
            out.append((a, b))
        return ssorted(out)

    def events_of_polarity(self, p: str) -> list:
        return [e for e in self.events if self.polarity[e] == p]

    # -- configurations --------------------------------------------------

    def is_configuration(self, x: Iterable[Event]) -> bool:
        xs = frozenset(x)
        for e in xs:
            if e not in self._below:
                return False
            if not self._below[e] <= xs:
                return False
            if self._conf[e] & xs:
                return False
        return True

    def is_enabled(self, x: Config, e: Event) -> bool:
        """True iff ``e`` is not in ``x`` and ``x ∪ {e}`` is a configuration."""
        if e not in self._below:
            raise KeyError(f"{e!r} is not an event")
        return e not in x and self._preds[e] <= x and not (self._conf[e] & x)

    def enabled(self, x: Config) -> list:
        return [e for e in self.events if e not in x and self._preds[e] <= x and not (self._conf[e] & x)]

    def configurations(self, max_size: int | None = None) -> list[Config]:
        """All configurations, ordered by size then lexicographically."""
        key = ("configs", max_size)
        if key in self._cache:
            return self._cache[key]
        if max_size is None and ("configs", None) in self._cache:
            return self._cache[("configs", None)]
        layer = {frozenset()}
        out: list = [frozenset()]
        size = 0
        while layer and (max_size is None or size < max_size):
            nxt = set()
            for x in layer:
                for e in self.enabled(x):
                    nxt.add(x | {e})
            layer = nxt
            size += 1
            out.extend(ssorted(layer))
        self._cache[key] = out
        return out

    def down_closure(self, xs: Iterable[Event]) -> frozenset:
        acc = set()
        for e in xs:
            acc.add(e)
            acc |= self._below[e]
        return frozenset(acc)

    def maximal(self, x: Config) -> list:
        return [e for e in x if not (self._succs[e] & x)]

    def restrict(self, keep: Iterable[Event]) -> "EventStructure":
        """Induced sub-structure on a down-closed set of events."""
        ks = set(keep)
        return EventStructure.build(
            ks,
            [(a, b) for a, b in self.cover if a in ks and b in ks],
            [tuple(p) for p in self.conflict if p <= ks],
            {e: self.polarity[e] for e in ks},
        )

    def relabel(self, f: Mapping[Event, Event]) -> "EventStructure":
        return EventStructure.build(
            [f[e] for e in self.events],
            [(f[a], f[b]) for a, b in self.cover],
            [tuple(f[e] for e in p) for p in self.conflict],
            {f[e]: p for e, p in self.polarity.items()},
        )

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        for e in self.events:
            g.add_node(e, pol=self.polarity[e])
        g.add_edges_from(self.cover)
        return g


def configurations(es: EventStructure, max_size: int | None = None) -> list[Config]:
    return es.configurations(max_size)


def is_enabled(es: EventStructure, x: Config, e: Event) -> bool:
    return es.is_enabled(frozenset(x), e)


# -- maps ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EsMap:
    """A total function between the events of two event structures."""

    source: EventStructure
    target: EventStructure
    mapping: Mapping[Event, Event]

    def __call__(self, e: Event) -> Event:
        return self.mapping[e]

    def image(self, x: Iterable[Event]) -> frozenset:
        return frozenset(self.mapping[e] for e in x)


def validate_map(m: EsMap) -> Report:
    rep = Report("event structure map")
    missing = [e for e in m.source.events if e not in m.mapping]
    for e in missing:
        rep.add(f"event {e!r} has no image")
    if missing:
        return rep
    for x in m.source.configurations():
        img = m.image(x)
        if len(img) != len(x):
            rep.add(f"not injective on configuration {ssorted(x)}")
        if not m.target.is_configuration(img):
            rep.add(f"image of {ssorted(x)} is not a configuration")
    return rep


# -- grounded causal chains ----------------------------------------------


def gccs(es: EventStructure) -> list[tuple]:
    """All chains ``e1 ↣ ... ↣ en`` with ``e1`` minimal."""
    out: list[tuple] = []
    stack: list[tuple] = [(e,) for e in reversed(es.minimal_events())]
    while stack:
        chain = stack.pop()
        out.append(chain)
        for s in reversed(ssorted(es.succs(chain[-1]))):
            stack.append(chain + (s,))
    return ssorted(out)


# -- reconstruction from a configuration family ----------------------------


@dataclass(frozen=True)
class PrimeReconstruction:
    """Result of :func:`primes_from_family`.

    ``top[p]`` is the unique maximal element of the prime configuration
    ``prime[p]`` that became event ``p``.
    """

    es: EventStructure
    top: dict
    prime: dict

    def config_of(self, y: Iterable) -> frozenset:
        """Events whose prime sits inside the family member ``y``."""
        ys = frozenset(y)
        return frozenset(p for p, pr in self.prime.items() if pr <= ys)

    def union(self, x: Iterable) -> frozenset:
        acc: set = set()
        for p in x:
            acc |= self.prime[p]
        return frozenset(acc)


def check_stable(family: Iterable[Iterable]) -> Report:
    fam = {frozenset(x) for x in family}
    rep = Report("stable family")
    if frozenset() not in fam:
        rep.add("empty set missing")
    members = ssorted(fam)
    for i, x in enumerate(members):
        for y in members[i + 1:]:
            u = x | y
            if not any(u <= z for z in fam):
                continue
            if u not in fam:
                rep.add(f"compatible union missing: {ssorted(u)}")
            if (x & y) not in fam:
                rep.add(f"compatible intersection missing: {ssorted(x & y)}")
    for x in members:
        for a in x:
            for b in x:
                if a == b:
                    continue
                if not any(y <= x and (a in y) != (b in y) for y in fam):
                    rep.add(f"coincidence of {a!r} and {b!r} in {ssorted(x)}")
    return rep


def _primes(fam: set) -> dict:
    """Map each (member, element) to the prime [e]_x = ∩{y ∈ F : e ∈ y ⊆ x}."""
    primes: dict = {}
    for x in fam:
        subs = [y for y in fam if y <= x]
        for e in x:
            acc = x
            for y in subs:
                if e in y:
                    acc = acc & y
            primes[acc] = e
    return primes


def primes_from_family(family: Iterable[Iterable], check: bool = True) -> PrimeReconstruction:
    """Rebuild an event structure from a stable family via its primes.

    Events are the prime members (those with a unique maximal element);
    causality is inclusion and two primes conflict when no member of the
    family contains both.
    """
    fam = {frozenset(x) for x in family}
    if check:
        rep = check_stable(fam)
        if not rep.ok:
            raise ValidationError(rep)
    primes = _primes(fam)
    ordered = sorted(primes, key=lambda p: (len(p), skey(primes[p]), skey(p)))
    ids = {p: i for i, p in enumerate(ordered)}
    causes = [(ids[p], ids[q]) for p in ordered for q in ordered if p < q]
    maximal = [x for x in fam if not any(x < y for y in fam)]
    conflicts = [
        (ids[p], ids[q])
        for i, p in enumerate(ordered)
        for q in ordered[i + 1:]
        if not any((p | q) <= m for m in maximal)
    ]
    es = EventStructure.build(range(len(ordered)), causes, conflicts)
    return PrimeReconstruction(
        es=es,
        top={ids[p]: primes[p] for p in ordered},
        prime={ids[p]: p for p in ordered},
    )


def isomorphic(a: EventStructure, b: EventStructure) -> bool:
    """Isomorphism of event structures (order, conflict, polarity)."""

    def graph(es: EventStructure) -> nx.DiGraph:
        g = nx.DiGraph()
        for e in es.events:
            g.add_node(e, pol=es.polarity[e])
        for u, v in es.cover:
            g.add_edge(u, v, kind="cause")
        for u, v in es.minimal_conflicts():
            g.add_edge(u, v, kind="conflict")
            g.add_edge(v, u, kind="conflict")
        return g

    if len(a) != len(b):
        return False
    return nx.is_isomorphic(
        graph(a),
        graph(b),
        node_match=lambda x, y: x["pol"] == y["pol"],
        edge_match=lambda x, y: x["kind"] == y["kind"],
    )


def validate_es(es: EventStructure) -> Report:
    """Re-check the axioms on an already built structure."""
    rep = Report("event structure")
    g = es.digraph()
    if not nx.is_directed_acyclic_graph(g):
        rep.add("cover relation has a cycle")
    for pair in es.conflict:
        if len(pair) != 2:
            rep.add(f"reflexive conflict {ssorted(pair)}")
            continue
        a, b = tuple(pair)
        for s in es.succs(b):
            if not es.in_conflict(a, s):
                rep.add(f"conflict {a!r} # {b!r} not inherited by {s!r}")
        for s in es.succs(a):
            if not es.in_conflict(b, s):
                rep.add(f"conflict {b!r} # {a!r} not inherited by {s!r}")
    return rep


# -- text format -----------------------------------------------------------


class ParseError(ValueError):
    """Malformed input text; carries the offending line number."""

    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def parse_id(tok: str, line: int | None = None) -> Any:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"event id must be an integer, got {tok!r}", line) from None


def parse_es_lines(lines: Iterable[tuple[int, list[str]]]) -> tuple[EventStructure, list]:
    """Consume ``event``/``cause``/``conflict`` lines; return the rest untouched."""
    events: list = []
    pol: dict = {}
    causes: list = []
    conflicts: list = []
    rest: list = []
    for no, toks in lines:
        head = toks[0]
        if head == "event":
            if len(toks) not in (2, 3):
                raise ParseError("expected: event <id> [pol=<+|-|.>]", no)
            e = parse_id(toks[1], no)
            if e in pol:
                raise ParseError(f"duplicate event {e}", no)
            p = "."
            if len(toks) == 3:
                if not toks[2].startswith("pol="):
                    raise ParseError(f"unexpected token {toks[2]!r}", no)
                p = toks[2][4:]
                if p not in POLARITIES:
                    raise ParseError(f"bad polarity {p!r}", no)
            events.append(e)
            pol[e] = p
        elif head in ("cause", "conflict"):
            if len(toks) != 3:
                raise ParseError(f"expected: {head} <id> <id>", no)
            pair = (parse_id(toks[1], no), parse_id(toks[2], no))
            for e in pair:
                if e not in pol:
                    raise ParseError(f"unknown event {e}", no)
            (causes if head == "cause" else conflicts).append(pair)
        else:
            rest.append((no, toks))
    try:
        es = EventStructure.build(events, causes, conflicts, pol)
    except ValidationError:
        raise
    return es, rest


def tokenize(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line.split()))
    return out


def parse_es(text: str) -> EventStructure:
    es, rest = parse_es_lines(tokenize(text))
    if rest:
        no, toks = rest[0]
        raise ParseError(f"unknown directive {toks[0]!r}", no)
    return es


def numbering(es: EventStructure) -> dict:
    """Ids used when dumping: existing int ids are kept, others renumbered."""
    if all(isinstance(e, int) and not isinstance(e, bool) for e in es.events):
        return {e: e for e in es.events}
    return {e: i for i, e in enumerate(es.events)}


def dump_es(es: EventStructure, ids: Mapping | None = None) -> str:
    ids = ids or numbering(es)
    lines = [f"event {ids[e]} pol={es.polarity[e]}" for e in es.events]
    lines += [f"cause {ids[a]} {ids[b]}" for a, b in sorted(es.cover, key=lambda p: (ids[p[0]], ids[p[1]]))]
    mc = sorted(((ids[a], ids[b]) for a, b in es.minimal_conflicts()), key=lambda p: (min(p), max(p)))
    lines += [f"conflict {min(p)} {max(p)}" for p in mc]
    return "\n".join(lines) + "\n"


_DOT_COLOUR = {"+": "forestgreen", "-": "firebrick", ".": "gray40"}


def to_dot(es: EventStructure, name: str = "es", labels: Mapping | None = None) -> str:
    """Cover edges as arrows, minimal conflicts as dashed undirected edges."""
    ids = numbering(es)
    out = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for e in es.events:
        lab = labels[e] if labels and e in labels else f"{ids[e]}{es.polarity[e] if es.polarity[e] != '.' else ''}"
        out.append(f'  "{ids[e]}" [label="{lab}", color={_DOT_COLOUR[es.polarity[e]]}];')
    for a, b in sorted(es.cover, key=lambda p: (ids[p[0]], ids[p[1]])):
        out.append(f'  "{ids[a]}" -> "{ids[b]}";')
    for a, b in es.minimal_conflicts():
        out.append(f'  "{ids[a]}" -> "{ids[b]}" [dir=none, style=dashed, color=gray50];')
    out.append("}")
    return "\n".join(out) + "\n"


def iter_subsets(xs: list) -> Iterator[frozenset]:
    n = len(xs)
    for mask in range(1 << n):
        yield frozenset(xs[i] for i in range(n) if mask >> i & 1)


def principal(es: EventStructure, e: Event) -> frozenset:
    return es.down(e)


def bfs_order(es: EventStructure, x: Config) -> list:
    """A linear extension of ``x`` (deterministic)."""
    done: set = set()
    out = []
    pending = deque(ssorted(x))
    while pending:
        e = pending.popleft()
        if es.preds(e) <= done:
            done.add(e)
            out.append(e)
        else:
            pending.append(e)
    return out
