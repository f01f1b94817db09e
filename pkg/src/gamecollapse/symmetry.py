"""Isomorphism families, thin concurrent games and symmetry factorization."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .es import EventStructure, EsMap
from .util import Report, ValidationError, skey, ssorted


@dataclass(frozen=True)
class SymBijection:
    """A bijection between two configurations, stored as its set of pairs."""

    pairs: frozenset

    @classmethod
    def of(cls, mapping: Mapping | Iterable[tuple]) -> "SymBijection":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        return cls(frozenset(items))

    @classmethod
    def identity(cls, x: Iterable) -> "SymBijection":
        return cls(frozenset((e, e) for e in x))

    @cached_property
    def fwd(self) -> dict:
        return dict(self.pairs)

    @cached_property
    def dom(self) -> frozenset:
        return frozenset(a for a, _ in self.pairs)

    @cached_property
    def cod(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)

    def __call__(self, e: Hashable) -> Hashable:
        return self.fwd[e]

    def __len__(self) -> int:
        return len(self.pairs)

    def is_bijection(self) -> bool:
        return len(self.dom) == len(self.pairs) == len(self.cod)

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.pairs)

    def inverse(self) -> "SymBijection":
        return SymBijection(frozenset((b, a) for a, b in self.pairs))

    def then(self, other: "SymBijection") -> "SymBijection":
        """``other ∘ self`` (apply self first)."""
        if self.cod != other.dom:
            raise ValueError("bijections are not composable")
        f = other.fwd
        return SymBijection(frozenset((a, f[b]) for a, b in self.pairs))

    def __matmul__(self, other: "SymBijection") -> "SymBijection":
        """``self @ other`` is ``self ∘ other``."""
        return other.then(self)

    def restrict(self, x: Iterable) -> "SymBijection":
        xs = frozenset(x)
        return SymBijection(frozenset(p for p in self.pairs if p[0] in xs))

    def extends(self, other: "SymBijection") -> bool:
        return other.pairs <= self.pairs

    def sort_key(self) -> tuple:
        return tuple(sorted((skey(a), skey(b)) for a, b in self.pairs))

    def __repr__(self) -> str:
        body = ", ".join(f"{a!r}->{b!r}" for a, b in ssorted(self.pairs))
        return f"Sym{{{body}}}"


BetweenFn = Callable[[frozenset, frozenset], Iterable[SymBijection]]


class IsoFamily:
    """A family of bijections between configurations of ``es``.

    Either extensional (``bijections``) or given by a ``between`` function
    that lists the members from one configuration to another.  Results are
    cached, so a function-backed family behaves extensionally once touched.
    """

    def __init__(
        self,
        es: EventStructure,
        between: BetweenFn | None = None,
        bijections: Iterable[SymBijection] | None = None,
        name: str = "family",
    ):
        self.es = es
        self.name = name
        self._fn = between
        self._table: dict | None = None
        if bijections is not None:
            table: dict = {}
            for b in bijections:
                table.setdefault((b.dom, b.cod), set()).add(b)
            self._table = {k: tuple(ssorted(v)) for k, v in table.items()}
        self._cache: dict = {}
        self._sets: dict = {}

    @classmethod
    def identities(cls, es: EventStructure, name: str = "identities") -> "IsoFamily":
        def between(x: frozenset, y: frozenset):
            return (SymBijection.identity(x),) if x == y else ()

        return cls(es, between=between, name=name)

    @cached_property
    def _by_size(self) -> dict:
        out: dict = {}
        for x in self.es.configurations():
            out.setdefault(len(x), []).append(x)
        return out

    def between(self, x: frozenset, y: frozenset) -> tuple:
        key = (x, y)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if len(x) != len(y):
            res: tuple = ()
        elif self._table is not None:
            res = self._table.get(key, ())
        else:
            res = tuple(ssorted(set(self._fn(x, y))))
        self._cache[key] = res
        return res

    def from_(self, x: frozenset) -> Iterator[SymBijection]:
        for y in self._by_size.get(len(x), ()):
            yield from self.between(x, y)

    def targets(self, x: frozenset) -> list:
        return [y for y in self._by_size.get(len(x), ()) if self.between(x, y)]

    def __contains__(self, th: SymBijection) -> bool:
        key = (th.dom, th.cod)
        s = self._sets.get(key)
        if s is None:
            s = frozenset(self.between(th.dom, th.cod))
            self._sets[key] = s
        return th in s

    def __iter__(self) -> Iterator[SymBijection]:
        for x in self.es.configurations():
            yield from self.from_(x)

    def all(self) -> list[SymBijection]:
        return list(self)

    def materialize(self, name: str | None = None) -> "IsoFamily":
        return IsoFamily(self.es, bijections=self.all(), name=name or self.name)

    def related(self, x: frozenset, y: frozenset) -> bool:
        return bool(self.between(x, y))


def close_family(es: EventStructure, generators: Iterable[SymBijection], name: str = "family") -> IsoFamily:
    """Smallest set with the generators, identities, inverses, composites and restrictions."""
    configs = es.configurations()
    cfgset = set(configs)
    members: set = {SymBijection.identity(x) for x in configs}
    queue: deque = deque()

    def push(b: SymBijection) -> None:
        if b not in members:
            members.add(b)
            queue.append(b)

    for g in generators:
        if not g.is_bijection() or g.dom not in cfgset or g.cod not in cfgset:
            raise ValidationError(f"generator {g!r} is not a bijection between configurations")
        push(g)
    while queue:
        b = queue.popleft()
        push(b.inverse())
        for e in es.maximal(b.dom):
            r = b.restrict(b.dom - {e})
            if r.cod in cfgset:
                push(r)
        for c in list(members):
            if c.cod == b.dom:
                push(c.then(b))
            if b.cod == c.dom:
                push(b.then(c))
    return IsoFamily(es, bijections=members, name=name)


def validate_iso_family(f: IsoFamily, polarity: bool = False) -> Report:
    """Check groupoid, restriction and extension axioms (one-step forms)."""
    es = f.es
    rep = Report(f"isomorphism family {f.name}")
    configs = es.configurations()
    cfgset = set(configs)
    members = f.all()
    for x in configs:
        if SymBijection.identity(x) not in f:
            rep.add(f"missing identity on {ssorted(x)}")
    for th in members:
        if not th.is_bijection():
            rep.add(f"{th!r} is not a bijection")
            continue
        if th.dom not in cfgset or th.cod not in cfgset:
            rep.add(f"{th!r} does not relate configurations")
            continue
        if polarity and any(es.pol(a) != es.pol(b) for a, b in th.pairs):
            rep.add(f"{th!r} does not preserve polarity")
        if th.inverse() not in f:
            rep.add(f"missing inverse of {th!r}")
        for e in es.maximal(th.dom):
            r = th.restrict(th.dom - {e})
            if r.cod not in cfgset or r not in f:
                rep.add(f"missing restriction of {th!r} to {ssorted(th.dom - {e})}")
        for e in es.enabled(th.dom):
            big = th.dom | {e}
            if not any(t2.extends(th) for t2 in f.from_(big)):
                rep.add(f"missing extension of {th!r} by {e!r}")
    by_dom: dict = {}
    for th in members:
        by_dom.setdefault(th.dom, []).append(th)
    for th in members:
        for t2 in by_dom.get(th.cod, ()):
            if th.then(t2) not in f:
                rep.add(f"missing composite of {th!r} then {t2!r}")
    return rep


@dataclass(frozen=True, eq=False)
class Tcg:
    """A game with symmetry: ``tilde`` plus its negative and positive parts."""

    es: EventStructure
    tilde: IsoFamily
    neg: IsoFamily
    pos: IsoFamily

    @classmethod
    def trivial(cls, es: EventStructure) -> "Tcg":
        ids = IsoFamily.identities(es)
        return cls(es, ids, ids, ids)


def _extends_by(big: SymBijection, small: SymBijection, es: EventStructure, pol: str) -> bool:
    extra = big.pairs - small.pairs
    return small.pairs <= big.pairs and all(es.pol(a) == pol for a, _ in extra)


def validate_tcg(t: Tcg) -> Report:
    es = t.es
    rep = Report("thin concurrent game")
    for fam, label in ((t.tilde, "tilde"), (t.neg, "negative"), (t.pos, "positive")):
        sub = validate_iso_family(fam, polarity=True)
        rep.extend(sub, prefix=f"[{label}] ")
    for th in t.neg:
        if th not in t.tilde:
            rep.add(f"negative symmetry {th!r} not in tilde")
        elif th in t.pos and not th.is_identity():
            rep.add(f"non-identity {th!r} is both positive and negative")
    for th in t.pos:
        if th not in t.tilde:
            rep.add(f"positive symmetry {th!r} not in tilde")
    for fam, p, label in ((t.neg, "-", "negative"), (t.pos, "+", "positive")):
        for th in fam:
            for e in es.enabled(th.dom):
                if es.pol(e) != p:
                    continue
                for big in t.tilde.from_(th.dom | {e}):
                    if big.extends(th) and big not in fam:
                        rep.add(f"{label} {th!r} extended by {p} pair to {big!r} leaves the {label} family")
    return rep


def factorize_all(t: Tcg, th: SymBijection) -> list[tuple[SymBijection, SymBijection]]:
    out = []
    for tn in t.neg.from_(th.dom):
        tp_pairs = tn.inverse().then(th)
        if tp_pairs in t.pos:
            out.append((tn, tp_pairs))
    return out


def factorize(t: Tcg, th: SymBijection) -> tuple[SymBijection, SymBijection]:
    """Split ``th`` as ``pos ∘ neg``; the split is unique in a valid tcg."""
    if th not in t.tilde:
        raise ValidationError(f"{th!r} is not a symmetry of the game")
    found = factorize_all(t, th)
    if len(found) != 1:
        raise ValidationError(f"{len(found)} factorizations of {th!r}; the game is not a valid tcg")
    return found[0]


def sym_compose(f: IsoFamily, second: SymBijection, first: SymBijection) -> SymBijection:
    """``second ∘ first`` with membership re-checked."""
    r = first.then(second)
    if r not in f:
        raise ValidationError(f"composite {r!r} not in {f.name}")
    return r


def sym_invert(f: IsoFamily, th: SymBijection) -> SymBijection:
    r = th.inverse()
    if r not in f:
        raise ValidationError(f"inverse {r!r} not in {f.name}")
    return r


def natural_equiv(f: EsMap, g: EsMap, target: IsoFamily, pos: IsoFamily | None = None) -> str:
    """``'~+'``, ``'~'`` or ``'none'`` according to the symmetries g∘f⁻¹."""
    positive = pos is not None
    for x in f.source.configurations():
        th = SymBijection(frozenset((f(e), g(e)) for e in x))
        if th not in target:
            return "none"
        if positive and th not in pos:
            positive = False
    return "~+" if positive else "~"
