"""Finite groupoids, distributors and their coend composition.

A distributor ``α : A ↦ B`` is given lazily by a witness function on
points ``(a, b)`` together with a left action of ``B`` and a right action
of ``A``.  Witness sets are cached per point.  Composition builds coend
classes with a union-find, keyed by a deterministic representative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from networkx.utils import UnionFind

from .symmetry import IsoFamily, SymBijection
from .util import Report, TruncationError, ValidationError, skey, ssorted

# -- groupoids -----------------------------------------------------------------


class Groupoid:
    """Interface for finite groupoids.  ``compose(g, f)`` is ``g ∘ f``."""

    name = "groupoid"

    def objects(self) -> list:
        raise NotImplementedError

    def hom(self, a, b) -> tuple:
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def inverse(self, f):
        raise NotImplementedError

    def dom(self, f):
        raise NotImplementedError

    def cod(self, f):
        raise NotImplementedError

    # derived helpers

    def out_of(self, a) -> Iterator:
        for b in self.objects():
            yield from self.hom(a, b)

    def automorphisms(self, a) -> tuple:
        return self.hom(a, a)

    def morphisms(self) -> Iterator:
        objs = self.objects()
        for a in objs:
            for b in objs:
                yield from self.hom(a, b)

    def components(self) -> list[list]:
        """Isomorphism classes of objects (deterministic order)."""
        uf = UnionFind()
        objs = self.objects()
        for a in objs:
            uf[a]
            for b in objs:
                if self.hom(a, b):
                    uf.union(a, b)
        groups: dict = {}
        for a in objs:
            groups.setdefault(uf[a], []).append(a)
        return sorted((ssorted(g) for g in groups.values()), key=lambda g: skey(g[0]))


def validate_groupoid(g: Groupoid, max_triples: int = 20000) -> Report:
    rep = Report(f"groupoid {g.name}")
    objs = g.objects()
    homs = {(a, b): g.hom(a, b) for a in objs for b in objs}
    for a in objs:
        ida = g.identity(a)
        if ida not in homs[(a, a)]:
            rep.add(f"identity of {a!r} missing")
    for (a, b), fs in homs.items():
        for f in fs:
            if g.dom(f) != a or g.cod(f) != b:
                rep.add(f"{f!r} listed in hom({a!r},{b!r}) with wrong endpoints")
            if g.compose(f, g.identity(a)) != f or g.compose(g.identity(b), f) != f:
                rep.add(f"unit law fails at {f!r}")
            inv = g.inverse(f)
            if g.compose(inv, f) != g.identity(a) or g.compose(f, inv) != g.identity(b):
                rep.add(f"inverse law fails at {f!r}")
    count = 0
    for a, b, c in itertools.product(objs, repeat=3):
        for f in homs[(a, b)]:
            for h in homs[(b, c)]:
                hf = g.compose(h, f)
                if hf not in homs[(a, c)]:
                    rep.add(f"composite {hf!r} not in hom({a!r},{c!r})")
                for d in objs:
                    for k in homs[(c, d)]:
                        count += 1
                        if count > max_triples:
                            return rep
                        if g.compose(k, hf) != g.compose(g.compose(k, h), f):
                            rep.add(f"associativity fails at {k!r},{h!r},{f!r}")
    return rep


@dataclass(frozen=True)
class Arrow:
    """Named morphism of an explicit groupoid."""

    name: str
    dom: Hashable
    cod: Hashable

    def __repr__(self) -> str:
        return self.name


class ExplicitGroupoid(Groupoid):
    """A groupoid given by a full composition table."""

    def __init__(self, objects: Iterable, arrows: Iterable[Arrow], table: dict, identities: dict,
                 name: str = "G"):
        self._objects = ssorted(objects)
        self._arrows = {a.name: a for a in arrows}
        self._table = dict(table)
        self._ids = dict(identities)
        self.name = name
        homs: dict = {}
        for a in self._arrows.values():
            homs.setdefault((a.dom, a.cod), []).append(a)
        self._homs = {k: tuple(ssorted(v)) for k, v in homs.items()}
        self._inv: dict = {}
        for f in self._arrows.values():
            for h in self._homs.get((f.cod, f.dom), ()):
                if self._table.get((h.name, f.name)) == self._ids[f.dom]:
                    self._inv[f.name] = h
                    break

    def objects(self) -> list:
        return self._objects

    def hom(self, a, b) -> tuple:
        return self._homs.get((a, b), ())

    def compose(self, g: Arrow, f: Arrow) -> Arrow:
        if f.cod != g.dom:
            raise ValueError(f"cannot compose {g!r} after {f!r}")
        try:
            return self._arrows[self._table[(g.name, f.name)]]
        except KeyError:
            raise ValidationError(f"composition table lacks {g.name} ∘ {f.name}") from None

    def identity(self, a) -> Arrow:
        return self._arrows[self._ids[a]]

    def inverse(self, f: Arrow) -> Arrow:
        try:
            return self._inv[f.name]
        except KeyError:
            raise ValidationError(f"{f.name} has no inverse") from None

    def dom(self, f: Arrow):
        return f.dom

    def cod(self, f: Arrow):
        return f.cod

    def arrow(self, name: str) -> Arrow:
        return self._arrows[name]


class DiscreteGroupoid(Groupoid):
    """A set seen as a groupoid with identities only."""

    def __init__(self, objects: Iterable, name: str = "set"):
        self._objects = ssorted(set(objects))
        self.name = name

    def objects(self) -> list:
        return self._objects

    def hom(self, a, b) -> tuple:
        return (("id", a),) if a == b else ()

    def compose(self, g, f):
        if g != f:
            raise ValueError("discrete groupoid: only identities compose")
        return f

    def identity(self, a):
        return ("id", a)

    def inverse(self, f):
        return f

    def dom(self, f):
        return f[1]

    def cod(self, f):
        return f[1]


class FamilyGroupoid(Groupoid):
    """Configurations of a game (e.g. complete ones) with symmetries as morphisms."""

    def __init__(self, family: IsoFamily, objects: Iterable[frozenset] | Callable | None = None,
                 name: str = "C~", member: Callable[[frozenset], bool] | None = None):
        """``objects`` may be a thunk, forced only when the object list is asked for.

        ``member`` answers containment without forcing it.
        """
        self.family = family
        if objects is None:
            objects = family.es.configurations
        self._thunk = objects if callable(objects) else None
        self._objects = None if callable(objects) else list(objects)
        self._objset = None if self._objects is None else set(self._objects)
        self._member = member
        self.name = name

    def objects(self) -> list:
        if self._objects is None:
            self._objects = list(self._thunk())
            self._objset = set(self._objects)
        return self._objects

    def hom(self, a, b) -> tuple:
        return self.family.between(a, b)

    def compose(self, g: SymBijection, f: SymBijection) -> SymBijection:
        return f.then(g)

    def identity(self, a) -> SymBijection:
        return SymBijection.identity(a)

    def inverse(self, f: SymBijection) -> SymBijection:
        return f.inverse()

    def dom(self, f: SymBijection):
        return f.dom

    def cod(self, f: SymBijection):
        return f.cod

    def __contains__(self, a) -> bool:
        if self._member is not None and self._objset is None:
            return self._member(a)
        self.objects()
        return a in self._objset


class ProductGroupoid(Groupoid):
    def __init__(self, left: Groupoid, right: Groupoid):
        self.left, self.right = left, right
        self.name = f"({left.name} x {right.name})"

    @cached_property
    def _objects(self) -> list:
        return [(a, b) for a in self.left.objects() for b in self.right.objects()]

    def objects(self) -> list:
        return self._objects

    def hom(self, a, b) -> tuple:
        return tuple(itertools.product(self.left.hom(a[0], b[0]), self.right.hom(a[1], b[1])))

    def compose(self, g, f):
        return (self.left.compose(g[0], f[0]), self.right.compose(g[1], f[1]))

    def identity(self, a):
        return (self.left.identity(a[0]), self.right.identity(a[1]))

    def inverse(self, f):
        return (self.left.inverse(f[0]), self.right.inverse(f[1]))

    def dom(self, f):
        return (self.left.dom(f[0]), self.right.dom(f[1]))

    def cod(self, f):
        return (self.left.cod(f[0]), self.right.cod(f[1]))


@dataclass(frozen=True)
class OpMor:
    """A morphism of ``A`` read in ``A^op`` (endpoints swapped)."""

    mor: Any


class OppositeGroupoid(Groupoid):
    def __init__(self, base: Groupoid):
        self.base = base
        self.name = f"{base.name}^op"

    def objects(self) -> list:
        return self.base.objects()

    def hom(self, a, b) -> tuple:
        return tuple(OpMor(f) for f in self.base.hom(b, a))

    def compose(self, g: OpMor, f: OpMor) -> OpMor:
        return OpMor(self.base.compose(f.mor, g.mor))

    def identity(self, a) -> OpMor:
        return OpMor(self.base.identity(a))

    def inverse(self, f: OpMor) -> OpMor:
        return OpMor(self.base.inverse(f.mor))

    def dom(self, f: OpMor):
        return self.base.cod(f.mor)

    def cod(self, f: OpMor):
        return self.base.dom(f.mor)


class SumGroupoid(Groupoid):
    """Disjoint union; objects and morphisms are tagged ``(0, -)`` / ``(1, -)``."""

    def __init__(self, left: Groupoid, right: Groupoid):
        self.parts = (left, right)
        self.name = f"({left.name} + {right.name})"

    def objects(self) -> list:
        return [(i, a) for i, g in enumerate(self.parts) for a in g.objects()]

    def hom(self, a, b) -> tuple:
        if a[0] != b[0]:
            return ()
        return tuple((a[0], f) for f in self.parts[a[0]].hom(a[1], b[1]))

    def compose(self, g, f):
        return (f[0], self.parts[f[0]].compose(g[1], f[1]))

    def identity(self, a):
        return (a[0], self.parts[a[0]].identity(a[1]))

    def inverse(self, f):
        return (f[0], self.parts[f[0]].inverse(f[1]))

    def dom(self, f):
        return (f[0], self.parts[f[0]].dom(f[1]))

    def cod(self, f):
        return (f[0], self.parts[f[0]].cod(f[1]))


class FullSubgroupoid(Groupoid):
    """The full subgroupoid of ``base`` on the listed objects."""

    def __init__(self, base: Groupoid, objects: Iterable, name: str | None = None):
        self.base = base
        self._objects = list(objects)
        self._objset = set(self._objects)
        self.name = name or f"{base.name}|sub"

    def objects(self) -> list:
        return self._objects

    def hom(self, a, b) -> tuple:
        if a not in self._objset or b not in self._objset:
            return ()
        return self.base.hom(a, b)

    def compose(self, g, f):
        return self.base.compose(g, f)

    def identity(self, a):
        return self.base.identity(a)

    def inverse(self, f):
        return self.base.inverse(f)

    def dom(self, f):
        return self.base.dom(f)

    def cod(self, f):
        return self.base.cod(f)


# -- Sym --------------------------------------------------------------------------


@dataclass(frozen=True)
class SymMor:
    """``⟨f_i⟩^π : dom → cod`` with ``comps[i] : dom[perm[i]] → cod[i]``."""

    perm: tuple
    comps: tuple
    dom: tuple
    cod: tuple


def invert_perm(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


class SymGroupoid(Groupoid):
    """Sequences over a base groupoid, truncated at ``maxlen``."""

    def __init__(self, base: Groupoid, maxlen: int):
        if maxlen < 0:
            raise ValueError("maxlen must be non-negative")
        self.base = base
        self.maxlen = maxlen
        self.name = f"Sym[{maxlen}]({base.name})"

    @cached_property
    def _objects(self) -> list:
        objs = self.base.objects()
        out = []
        for n in range(self.maxlen + 1):
            out.extend(itertools.product(objs, repeat=n))
        return out

    def objects(self) -> list:
        return self._objects

    def hom(self, a: tuple, b: tuple) -> tuple:
        if len(a) != len(b):
            return ()
        key = (tuple(a), tuple(b))
        hit = self._homs.get(key)
        if hit is None:
            hit = self._homs[key] = self._hom(*key)
        return hit

    @cached_property
    def _homs(self) -> dict:
        return {}

    def _hom(self, a: tuple, b: tuple) -> tuple:
        out = []
        n = len(a)
        for perm in itertools.permutations(range(n)):
            options = [self.base.hom(a[perm[i]], b[i]) for i in range(n)]
            if any(not o for o in options):
                continue
            for comps in itertools.product(*options):
                out.append(SymMor(perm, comps, tuple(a), tuple(b)))
        return tuple(out)

    def compose(self, g: SymMor, f: SymMor) -> SymMor:
        if f.cod != g.dom:
            raise ValueError("Sym morphisms are not composable")
        comps = tuple(self.base.compose(g.comps[i], f.comps[g.perm[i]]) for i in range(len(g.perm)))
        perm = tuple(f.perm[g.perm[i]] for i in range(len(g.perm)))
        return SymMor(perm, comps, f.dom, g.cod)

    def identity(self, a: tuple) -> SymMor:
        return SymMor(tuple(range(len(a))), tuple(self.base.identity(x) for x in a), tuple(a), tuple(a))

    def inverse(self, f: SymMor) -> SymMor:
        inv = invert_perm(f.perm)
        comps = tuple(self.base.inverse(f.comps[inv[j]]) for j in range(len(inv)))
        return SymMor(inv, comps, f.cod, f.dom)

    def dom(self, f: SymMor) -> tuple:
        return f.dom

    def cod(self, f: SymMor) -> tuple:
        return f.cod

    def permutation(self, a: tuple, perm: Sequence[int]) -> SymMor:
        """The identity-component morphism ``a → (a[perm[i]])_i``."""
        cod = tuple(a[p] for p in perm)
        return SymMor(tuple(perm), tuple(self.base.identity(x) for x in cod), tuple(a), cod)


def sym_groupoid(base: Groupoid, maxlen: int) -> SymGroupoid:
    return SymGroupoid(base, maxlen)


# -- functors -------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Functor:
    source: Groupoid
    target: Groupoid
    on_obj: Callable
    on_mor: Callable
    name: str = "F"

    def __call__(self, x):
        return self.on_obj(x)

    def map(self, f):
        return self.on_mor(f)


def identity_functor(g: Groupoid) -> Functor:
    return Functor(g, g, lambda a: a, lambda f: f, name=f"id_{g.name}")


def validate_functor(F: Functor, max_pairs: int = 20000) -> Report:
    rep = Report(f"functor {F.name}")
    A, B = F.source, F.target
    objs = A.objects()
    for a in objs:
        if F.map(A.identity(a)) != B.identity(F(a)):
            rep.add(f"identity of {a!r} not preserved")
    count = 0
    for a in objs:
        for b in objs:
            for f in A.hom(a, b):
                Ff = F.map(f)
                if B.dom(Ff) != F(a) or B.cod(Ff) != F(b):
                    rep.add(f"image of {f!r} has wrong endpoints")
                    continue
                for c in objs:
                    for g in A.hom(b, c):
                        count += 1
                        if count > max_pairs:
                            return rep
                        if F.map(A.compose(g, f)) != B.compose(F.map(g), Ff):
                            rep.add(f"composition {g!r}∘{f!r} not preserved")
    return rep


# -- distributors ---------------------------------------------------------------------------


class Distributor:
    """``α : A ↦ B``: witnesses ``α(a, b)``, left ``B``-action, right ``A``-action.

    ``left(g, w)`` acts by ``g ∈ B(b, b')`` and ``right(w, f)`` by
    ``f ∈ A(a', a)``.  ``support(a)``, when given, lists the ``b`` with
    ``α(a, b)`` possibly non-empty (a speed-up for composition).
    """

    def __init__(
        self,
        source: Groupoid,
        target: Groupoid,
        witnesses: Callable[[Any, Any], Iterable],
        left: Callable,
        right: Callable,
        name: str = "α",
        support: Callable[[Any], Iterable] | None = None,
        cosupport: Callable[[Any], Iterable] | None = None,
    ):
        self.source = source
        self.target = target
        self._witnesses = witnesses
        self._left = left
        self._right = right
        self.name = name
        self._support = support
        self._cosupport = cosupport
        self._cache: dict = {}

    def at(self, a, b) -> tuple:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is None:
            hit = tuple(ssorted(set(self._witnesses(a, b))))
            self._cache[key] = hit
        return hit

    def left(self, g, w):
        return self._left(g, w)

    def right(self, w, f):
        return self._right(w, f)

    def support(self, a) -> Iterable:
        if self._support is not None:
            return self._support(a)
        return self.target.objects()

    def cosupport(self, b) -> Iterable:
        if self._cosupport is not None:
            return self._cosupport(b)
        return self.source.objects()

    def count(self, a, b) -> int:
        return len(self.at(a, b))


def validate_distributor(d: Distributor, points: Iterable[tuple] | None = None,
                         max_checks: int = 50000) -> Report:
    """Identity, functoriality and commutation of the two actions."""
    rep = Report(f"distributor {d.name}")
    A, B = d.source, d.target
    pts = list(points) if points is not None else [(a, b) for a in A.objects() for b in B.objects()]
    checks = 0
    for a, b in pts:
        ws = d.at(a, b)
        if not ws:
            continue
        ida, idb = A.identity(a), B.identity(b)
        outs_b = list(B.out_of(b))
        ins_a = [A.inverse(f) for f in A.out_of(a)]  # f : a' → a
        for w in ws:
            if d.left(idb, w) != w or d.right(w, ida) != w:
                rep.add(f"identity acts non-trivially on {w!r} at {(a, b)!r}")
            for g in outs_b:
                gw = d.left(g, w)
                if gw not in set(d.at(a, B.cod(g))):
                    rep.add(f"{g!r}·{w!r} lands outside the witness set")
                    continue
                for g2 in B.out_of(B.cod(g)):
                    checks += 1
                    if checks > max_checks:
                        return rep
                    if d.left(B.compose(g2, g), w) != d.left(g2, gw):
                        rep.add(f"left action not functorial at {w!r}")
                for f in ins_a:
                    checks += 1
                    if d.right(gw, f) != d.left(g, d.right(w, f)):
                        rep.add(f"actions do not commute at {w!r}")
            for f in ins_a:
                wf = d.right(w, f)
                if wf not in set(d.at(A.dom(f), b)):
                    rep.add(f"{w!r}·{f!r} lands outside the witness set")
                    continue
                for f2 in (A.inverse(h) for h in A.out_of(A.dom(f))):
                    checks += 1
                    if checks > max_checks:
                        return rep
                    if d.right(w, A.compose(f, f2)) != d.right(wf, f2):
                        rep.add(f"right action not functorial at {w!r}")
    return rep


def dist_identity(A: Groupoid) -> Distributor:
    return Distributor(
        A, A,
        witnesses=lambda a, b: A.hom(a, b),
        left=lambda g, w: A.compose(g, w),
        right=lambda w, f: A.compose(w, f),
        name=f"id_{A.name}",
        support=lambda a: [b for b in A.objects() if A.hom(a, b)],
        cosupport=lambda b: [a for a in A.objects() if A.hom(a, b)],
    )


@dataclass(frozen=True)
class CoendClass:
    """Class of ``(x, y)`` with ``x ∈ α(src, mid)``, ``y ∈ β(mid, tgt)``.

    The fields hold the representative (the least member).
    """

    src: Any
    tgt: Any
    mid: Any
    first: Any
    second: Any

    def __repr__(self) -> str:
        return f"[{self.second!r} • {self.first!r}]"


class Coend:
    """Witnesses of ``β • α`` at one point, as union-find classes."""

    def __init__(self, alpha: Distributor, beta: Distributor, a, c):
        B = alpha.target
        self.point = (a, c)
        uf = UnionFind()
        elems = []
        mids = [b for b in alpha.support(a) if alpha.at(a, b) and beta.at(b, c)]
        for b in mids:
            for x in alpha.at(a, b):
                for y in beta.at(b, c):
                    e = CoendClass(a, c, b, x, y)
                    uf[e]
                    elems.append(e)
        seen = set(elems)
        for e in elems:
            for g in B.out_of(e.mid):
                b2 = B.cod(g)
                if b2 == e.mid and g == B.identity(b2):
                    continue
                other = CoendClass(a, c, b2, alpha.left(g, e.first), beta.right(e.second, B.inverse(g)))
                if other not in seen:
                    raise ValidationError(f"coend element {other!r} escapes the enumerated middle objects")
                uf.union(e, other)
        groups: dict = {}
        for e in elems:
            groups.setdefault(uf[e], []).append(e)
        self.members = {}
        for g in groups.values():
            self.members[min(g, key=skey)] = ssorted(g)
        self.classes = ssorted(self.members)
        self.rep_of = {e: rep for rep, g in self.members.items() for e in g}

    def __len__(self) -> int:
        return len(self.classes)

    def canon(self, mid, first, second) -> CoendClass:
        e = CoendClass(self.point[0], self.point[1], mid, first, second)
        try:
            return self.rep_of[e]
        except KeyError:
            raise ValidationError(f"{e!r} is not an element of this coend") from None


class Composite(Distributor):
    """``β • α`` with classes represented by their least element."""

    def __init__(self, alpha: Distributor, beta: Distributor, name: str | None = None):
        if alpha.target is not beta.source and alpha.target.name != beta.source.name:
            raise ValidationError("distributors do not share the middle groupoid")
        self.parts = (alpha, beta)
        self._coends: dict = {}
        super().__init__(alpha.source, beta.target, self._classes, self._act_left, self._act_right,
                         name=name or f"({beta.name} • {alpha.name})", support=self._support_of)

    def coend(self, a, c) -> Coend:
        key = (a, c)
        hit = self._coends.get(key)
        if hit is None:
            hit = Coend(self.parts[0], self.parts[1], a, c)
            self._coends[key] = hit
        return hit

    def canon(self, a, c, mid, first, second) -> CoendClass:
        return self.coend(a, c).canon(mid, first, second)

    def _classes(self, a, c):
        return self.coend(a, c).classes

    def _act_left(self, h, w: CoendClass):
        beta = self.parts[1]
        return self.canon(w.src, self.target.cod(h), w.mid, w.first, beta.left(h, w.second))

    def _act_right(self, w: CoendClass, f):
        alpha = self.parts[0]
        return self.canon(self.source.dom(f), w.tgt, w.mid, alpha.right(w.first, f), w.second)

    def _support_of(self, a):
        alpha, beta = self.parts
        out = set()
        for b in alpha.support(a):
            if alpha.at(a, b):
                out.update(beta.support(b))
        return ssorted(out)


def dist_compose(alpha: Distributor, beta: Distributor, name: str | None = None) -> Composite:
    return Composite(alpha, beta, name)


# -- natural transformations and isos ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NatTransform:
    source: Distributor
    target: Distributor
    component: Callable  # (a, b, w) -> w'
    name: str = "ν"

    def __call__(self, a, b, w):
        return self.component(a, b, w)


def validate_nat(n: NatTransform, points: Iterable[tuple] | None = None, iso: bool = False) -> Report:
    rep = Report(f"natural transformation {n.name}")
    s, t = n.source, n.target
    A, B = s.source, s.target
    pts = list(points) if points is not None else [(a, b) for a in A.objects() for b in B.objects()]
    for a, b in pts:
        ws = s.at(a, b)
        targets = set(t.at(a, b))
        images = []
        for w in ws:
            try:
                v = n(a, b, w)
            except ValidationError as exc:
                rep.add(f"component undefined on {w!r}: {exc}")
                continue
            images.append(v)
            if v not in targets:
                rep.add(f"{w!r} ↦ {v!r} outside the target at {(a, b)!r}")
                continue
            for g in B.out_of(b):
                lhs = n(a, B.cod(g), s.left(g, w))
                if lhs != t.left(g, v):
                    rep.add(f"naturality in the target fails at {w!r}, {g!r}")
            for f0 in A.out_of(a):
                f = A.inverse(f0)
                lhs = n(A.dom(f), b, s.right(w, f))
                if lhs != t.right(v, f):
                    rep.add(f"naturality in the source fails at {w!r}, {f!r}")
        if iso and (len(set(images)) != len(ws) or set(images) != targets):
            rep.add(f"not a bijection at {(a, b)!r}: {len(ws)} -> {len(targets)}")
    return rep


def point_automorphisms(d: Distributor, a, b) -> list[tuple]:
    """Pairs ``(f, g)`` acting by ``w ↦ g · w · f⁻¹`` at a point."""
    A, B = d.source, d.target
    return [(f, g) for f in A.automorphisms(a) for g in B.automorphisms(b)]


def equivariant_bijection(group: Sequence, act1: Callable, set1: Sequence, act2: Callable,
                          set2: Sequence) -> dict | None:
    """An equivariant bijection between two finite ``group``-sets, or None.

    Orbits are matched greedily by stabilizer; orbits with equal
    stabilizers are interchangeable so greediness is complete.
    """
    if len(set1) != len(set2):
        return None
    remaining = set(set2)
    mapping: dict = {}
    for w in ssorted(set1):
        if w in mapping:
            continue
        stab = frozenset(i for i, g in enumerate(group) if act1(g, w) == w)
        target = None
        for v in ssorted(remaining):
            if frozenset(i for i, g in enumerate(group) if act2(g, v) == v) == stab:
                target = v
                break
        if target is None:
            return None
        for g in group:
            u, v = act1(g, w), act2(g, target)
            if u in mapping and mapping[u] != v:
                return None
            mapping[u] = v
            remaining.discard(v)
    if len(mapping) != len(set1) or len(set(mapping.values())) != len(set2):
        return None
    return mapping


def find_natural_iso(alpha: Distributor, beta: Distributor, points: Iterable[tuple] | None = None) -> dict | None:
    """Per-point bijections equivariant under the point automorphisms.

    Returns ``{point: {w: v}}`` or None when some point has non-isomorphic
    automorphism-sets.  (Naturality across non-automorphisms is then
    recovered by transport; callers validate with :func:`validate_nat`.)
    """
    A, B = alpha.source, alpha.target
    pts = list(points) if points is not None else [(a, b) for a in A.objects() for b in B.objects()]
    out = {}
    for a, b in pts:
        grp = point_automorphisms(alpha, a, b)

        def act1(fg, w, a=a):
            f, g = fg
            return alpha.left(g, alpha.right(w, A.inverse(f)))

        def act2(fg, w, a=a):
            f, g = fg
            return beta.left(g, beta.right(w, A.inverse(f)))

        m = equivariant_bijection(grp, act1, alpha.at(a, b), act2, beta.at(a, b))
        if m is None:
            return None
        out[(a, b)] = m
    return out


# -- unitors and associator (explicit formulas) ---------------------------------------------------


def left_unitor(alpha: Distributor) -> tuple[Distributor, NatTransform]:
    """``id_B • α ≅ α``: the class of ``(x, g)`` goes to ``g · x``."""
    comp = dist_compose(alpha, dist_identity(alpha.target))
    nt = NatTransform(comp, alpha, lambda a, b, w: alpha.left(w.second, w.first), name="λ")
    return comp, nt


def right_unitor(alpha: Distributor) -> tuple[Distributor, NatTransform]:
    """``α • id_A ≅ α``: the class of ``(f, x)`` goes to ``x · f``."""
    comp = dist_compose(dist_identity(alpha.source), alpha)
    nt = NatTransform(comp, alpha, lambda a, b, w: alpha.right(w.second, w.first), name="ρ")
    return comp, nt


def associator(alpha: Distributor, beta: Distributor, gamma: Distributor):
    """``(γ • β) • α ≅ γ • (β • α)`` on representatives, with both composites."""
    ba = dist_compose(alpha, beta)
    left_side = dist_compose(ba, gamma)            # γ • (β • α)
    gb = dist_compose(beta, gamma)
    right_side = dist_compose(alpha, gb)           # (γ • β) • α

    def component(a, d, w: CoendClass):
        # [ (b, x, [ (c, y, z) ]) ]  ↦  [ (c, [ (b, x, y) ], z) ]
        inner = w.second
        u = ba.canon(a, inner.mid, w.mid, w.first, inner.first)
        return left_side.canon(a, d, inner.mid, u, inner.second)

    return right_side, left_side, NatTransform(right_side, left_side, component, name="assoc")


def check_class_map(nt: NatTransform, points: Iterable[tuple]) -> Report:
    """The map is well defined on classes (all members agree) and bijective."""
    rep = validate_nat(nt, points, iso=True)
    src = nt.source
    if isinstance(src, Composite):
        for a, b in points:
            co = src.coend(a, b)
            for cls, members in co.members.items():
                vals = {nt(a, b, m) for m in members}
                if len(vals) != 1:
                    rep.add(f"class {cls!r} maps to {len(vals)} values")
    return rep


# -- promotion on Sym ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Prom:
    """Normal form ``⟦s_i⟧^π`` of a promotion witness.

    ``blocks[i]`` lists (increasingly) the positions of the source sequence
    fed to the ``i``-th component witness ``parts[i]``.
    """

    blocks: tuple
    parts: tuple

    def __repr__(self) -> str:
        inner = ", ".join(f"{list(b)}:{p!r}" for b, p in zip(self.blocks, self.parts))
        return f"⟦{inner}⟧"


def ordered_partitions(positions: Sequence[int], n: int) -> Iterator[tuple]:
    """All assignments of ``positions`` to ``n`` labelled blocks (blocks sorted)."""
    if n == 0:
        if not positions:
            yield ()
        return
    for labels in itertools.product(range(n), repeat=len(positions)):
        yield tuple(tuple(p for p, l in zip(positions, labels) if l == i) for i in range(n))


def _normalize(symA: SymGroupoid, alpha: Distributor, src: tuple, blocks: Sequence[Sequence[int]],
               parts: Sequence, fix: SymMor | None = None) -> Prom:
    """Bring ``(blocks as concat order, parts, f)`` to normal form.

    ``blocks`` give, for each concatenation slot, the position of ``src``
    it is sent to by ``fix`` (``fix`` maps the concatenation to ``src``;
    None means identity components).  Components are pushed into the
    parts, then each block is sorted by a pure permutation.
    """
    new_blocks = []
    new_parts = []
    base = symA.base
    for blk, s in zip(blocks, parts):
        blk = tuple(blk)
        old_seq = tuple(fix.dom[m] for m in blk) if fix is not None else tuple(src[j] for j in blk)
        if fix is not None:
            inv = invert_perm(fix.perm)
            # slot m of the concatenation goes to position inv[m] of src with component comps[inv[m]]
            positions = tuple(inv[m] for m in blk)
            comps = tuple(fix.comps[inv[m]] for m in blk)
            mid_seq = tuple(src[j] for j in positions)
            rho = SymMor(tuple(range(len(blk))), tuple(base.inverse(c) for c in comps), mid_seq, old_seq)
            s = alpha.right(s, rho)
        else:
            positions = blk
            mid_seq = old_seq
        order = sorted(range(len(positions)), key=lambda k: positions[k])
        sorted_pos = tuple(positions[k] for k in order)
        sorted_seq = tuple(src[j] for j in sorted_pos)
        # pure permutation from the sorted sequence to the current one
        perm = tuple(order.index(k) for k in range(len(positions)))
        rho2 = SymMor(perm, tuple(base.identity(x) for x in mid_seq), sorted_seq, mid_seq)
        s = alpha.right(s, rho2)
        new_blocks.append(sorted_pos)
        new_parts.append(s)
    return Prom(tuple(new_blocks), tuple(new_parts))


def promotion_dagger(alpha: Distributor, maxlen: int) -> Distributor:
    """``α† : Sym(A) ↦ Sym(B)`` for ``α : Sym(A) ↦ B``, on normal forms."""
    symA = alpha.source
    if not isinstance(symA, SymGroupoid):
        raise ValidationError("promotion needs a distributor out of a Sym groupoid")
    symB = SymGroupoid(alpha.target, maxlen)

    def witnesses(src: tuple, tgt: tuple):
        if len(src) > symA.maxlen:
            raise TruncationError("source sequence longer than the Sym truncation")
        for blocks in ordered_partitions(tuple(range(len(src))), len(tgt)):
            options = [alpha.at(tuple(src[j] for j in blk), b) for blk, b in zip(blocks, tgt)]
            if any(not o for o in options):
                continue
            for parts in itertools.product(*options):
                yield Prom(blocks, parts)

    def left(g: SymMor, w: Prom) -> Prom:
        # new family indexed by the codomain of g
        blocks = tuple(w.blocks[g.perm[k]] for k in range(len(g.perm)))
        parts = tuple(alpha.left(g.comps[k], w.parts[g.perm[k]]) for k in range(len(g.perm)))
        return Prom(blocks, parts)

    def right(w: Prom, f: SymMor) -> Prom:
        # f : src' → src ; the new global morphism is f⁻¹ ∘ (identity-component map)
        src = f.cod
        new_src = f.dom
        concat = [j for blk in w.blocks for j in blk]
        glob = SymMor(tuple(concat_inverse(concat)), tuple(symA.base.identity(src[j]) for j in range(len(src))),
                      tuple(src[j] for j in concat), src)
        total = symA.compose(symA.inverse(f), glob)
        slots = []
        k = 0
        for blk in w.blocks:
            slots.append(tuple(range(k, k + len(blk))))
            k += len(blk)
        return _normalize(symA, alpha, new_src, slots, w.parts, fix=total)

    d = Distributor(symA, symB, witnesses, left, right, name=f"{alpha.name}†")
    d.base = alpha  # type: ignore[attr-defined]
    return d


def concat_inverse(concat: Sequence[int]) -> list[int]:
    """Permutation ``π`` with ``π[j] = slot of position j`` in the concatenation."""
    out = [0] * len(concat)
    for slot, j in enumerate(concat):
        out[j] = slot
    return out


def dereliction_i(A: Groupoid, maxlen: int) -> Distributor:
    """``i_A(⟨a⟩, a') = A[a, a']``, empty off length one."""
    symA = SymGroupoid(A, maxlen)

    def witnesses(src: tuple, b):
        if len(src) != 1:
            return ()
        return A.hom(src[0], b)

    def right(w, f: SymMor):
        return A.compose(w, f.comps[0])

    return Distributor(symA, A, witnesses, lambda g, w: A.compose(g, w), right, name=f"i_{A.name}")


def esp_compose(alpha: Distributor, beta: Distributor, maxlen: int) -> Distributor:
    """Kleisli composite ``β • α†``."""
    return dist_compose(promotion_dagger(alpha, maxlen), beta, name=f"({beta.name} ∘ {alpha.name})")


def theta_iso(A: Groupoid, maxlen: int):
    """``θ_A : i_A† ≅ id_{Sym A}`` sending ``⟦f_i⟧^π`` to ``⟨f_i⟩^π``."""
    prom = promotion_dagger(dereliction_i(A, maxlen), maxlen)
    symA = prom.source
    ident = dist_identity(symA)

    def component(src, tgt, w: Prom):
        perm = tuple(blk[0] for blk in w.blocks)
        return SymMor(perm, tuple(w.parts), tuple(src), tuple(tgt))

    return prom, ident, NatTransform(prom, ident, component, name="θ")


def eta_iso(alpha: Distributor, maxlen: int):
    """``η_α : α ≅ i_B • α†`` sending ``s`` to ``id_b • ⟦s⟧``."""
    B = alpha.target
    prom = promotion_dagger(alpha, maxlen)
    comp = dist_compose(prom, dereliction_i(B, maxlen))

    def component(src, b, s):
        w = Prom((tuple(range(len(src))),), (s,))
        return comp.canon(src, b, (b,), w, B.identity(b))

    return comp, NatTransform(alpha, comp, component, name="η")


def mu_iso(alpha: Distributor, beta: Distributor, maxlen: int):
    """``μ : (β • α†)† ≅ β† • α†`` by flattening nested promotion witnesses."""
    pa = promotion_dagger(alpha, maxlen)
    inner = dist_compose(pa, beta)                     # β • α† : Sym A ↦ C
    lhs = promotion_dagger(inner, maxlen)              # (β • α†)†
    rhs = dist_compose(pa, promotion_dagger(beta, maxlen))  # β† • α†
    symA = alpha.source

    def component(src, tgt, w: Prom):
        mids: list = []
        ts: list = []
        outer_blocks: list = []
        outer_parts: list = []
        for blk, u in zip(w.blocks, w.parts):
            # u = [ (b⃗_i, ⟦s_ij⟧ over positions of src|blk, t_i) ]
            inner_prom: Prom = u.first
            for sub, s in zip(inner_prom.blocks, inner_prom.parts):
                outer_blocks.append(tuple(blk[k] for k in sub))
                outer_parts.append(s)
            start = len(mids)
            mids.extend(u.mid)
            ts.append((tuple(range(start, start + len(u.mid))), u.second))
        mid = tuple(mids)
        aw = _normalize(symA, alpha, tuple(src), outer_blocks, outer_parts)
        bw = Prom(tuple(b for b, _ in ts), tuple(t for _, t in ts))
        return rhs.canon(src, tgt, mid, aw, bw)

    return lhs, rhs, NatTransform(lhs, rhs, component, name="μ")


# -- companions, conjoints and restrictions ----------------------------------------------------------


def companion(F: Functor) -> Distributor:
    """``F̂(a, b) = B[F a, b]``."""
    A, B = F.source, F.target
    return Distributor(
        A, B,
        witnesses=lambda a, b: B.hom(F(a), b),
        left=lambda g, w: B.compose(g, w),
        right=lambda w, f: B.compose(w, F.map(f)),
        name=f"{F.name}^",
    )


def conjoint(F: Functor) -> Distributor:
    """``F̌(b, a) = B[b, F a]``."""
    A, B = F.source, F.target
    return Distributor(
        B, A,
        witnesses=lambda b, a: B.hom(b, F(a)),
        left=lambda f, w: B.compose(F.map(f), w),
        right=lambda w, g: B.compose(w, g),
        name=f"{F.name}v",
    )


def companion_species(F: Functor, maxlen: int) -> Distributor:
    """``F̂(⟨a_1..a_n⟩, b) = Sym(B)[⟨F a_i⟩, ⟨b⟩]``; empty off length one."""
    A, B = F.source, F.target
    symA, symB = SymGroupoid(A, maxlen), SymGroupoid(B, maxlen)

    def witnesses(src: tuple, b):
        return symB.hom(tuple(F(a) for a in src), (b,))

    def left(g, w: SymMor):
        return symB.compose(SymMor((0,), (g,), (B.dom(g),), (B.cod(g),)), w)

    def right(w: SymMor, f: SymMor):
        Ff = SymMor(f.perm, tuple(F.map(c) for c in f.comps), tuple(F(a) for a in f.dom),
                    tuple(F(a) for a in f.cod))
        return symB.compose(w, Ff)

    return Distributor(symA, B, witnesses, left, right, name=f"{F.name}^sp")


def conjoint_species(F: Functor, maxlen: int) -> Distributor:
    """``F̌(⟨b_1..b_n⟩, a) = Sym(B)[⟨b_i⟩, ⟨F a⟩]``."""
    A, B = F.source, F.target
    symB = SymGroupoid(B, maxlen)

    def witnesses(src: tuple, a):
        return symB.hom(tuple(src), (F(a),))

    def left(f, w: SymMor):
        Ff = F.map(f)
        return symB.compose(SymMor((0,), (Ff,), (B.dom(Ff),), (B.cod(Ff),)), w)

    return Distributor(symB, A, witnesses, left, lambda w, g: symB.compose(w, g), name=f"{F.name}v-sp")


def restrict_left(alpha: Distributor, S: Functor) -> Distributor:
    """``α[S](a', b) = α(S a', b)``."""
    return Distributor(
        S.source, alpha.target,
        witnesses=lambda a, b: alpha.at(S(a), b),
        left=alpha.left,
        right=lambda w, f: alpha.right(w, S.map(f)),
        name=f"{alpha.name}[{S.name}]",
    )


def restrict_right(alpha: Distributor, T: Functor) -> Distributor:
    """``[T]α(a, b') = α(a, T b')``."""
    return Distributor(
        alpha.source, T.source,
        witnesses=lambda a, b: alpha.at(a, T(b)),
        left=lambda g, w: alpha.left(T.map(g), w),
        right=alpha.right,
        name=f"[{T.name}]{alpha.name}",
    )


def xi_iso(alpha: Distributor, beta: Distributor, L: Functor, R: Functor,
           unit: Callable, counit: Callable):
    """``ξ : β[L] • α ≅ β • [R]α`` and its inverse, from adjunction data.

    ``unit(b) : b → R L b`` and ``counit(b') : L R b' → b'``.
    """
    lhs = dist_compose(alpha, restrict_left(beta, L))
    rhs = dist_compose(restrict_right(alpha, R), beta)

    def fwd(a, c, w: CoendClass):
        b = w.mid
        return rhs.canon(a, c, L(b), alpha.left(unit(b), w.first), w.second)

    def bwd(a, c, w: CoendClass):
        b2 = w.mid
        return lhs.canon(a, c, R(b2), w.first, beta.right(w.second, counit(b2)))

    return lhs, rhs, NatTransform(lhs, rhs, fwd, name="ξ"), NatTransform(rhs, lhs, bwd, name="ξ⁻¹")


# -- equivalences of groupoids ----------------------------------------------------------------------


def groupoid_equivalence_check(L: Functor, R: Functor, unit: Callable, counit: Callable,
                               name: str = "equivalence") -> Report:
    """Functor laws, naturality of unit/counit, triangle identities, full faithfulness.

    ``unit(c) : c → R L c`` in the source of ``L``; ``counit(d) : L R d → d``.
    A missing component (None or an exception) is reported.
    """
    C, D = L.source, L.target
    rep = Report(name)
    rep.extend(validate_functor(L), prefix="[L] ")
    rep.extend(validate_functor(R), prefix="[R] ")
    if not rep.ok:
        return rep
    etas, epss = {}, {}
    for c in C.objects():
        etas[c] = _component(unit, c, C, c, R(L(c)), "unit", rep)
    for d in D.objects():
        epss[d] = _component(counit, d, D, L(R(d)), d, "counit", rep)
    for c in C.objects():
        for c2 in C.objects():
            n1, n2 = len(C.hom(c, c2)), len(D.hom(L(c), L(c2)))
            if n1 != n2:
                rep.add(f"L is not fully faithful at ({c!r}, {c2!r}): {n1} vs {n2}")
    if not rep.ok:
        return rep
    for c in C.objects():
        for c2 in C.objects():
            for f in C.hom(c, c2):
                if C.compose(etas[c2], f) != C.compose(R.map(L.map(f)), etas[c]):
                    rep.add(f"unit not natural at {f!r}")
        if D.compose(epss[L(c)], L.map(etas[c])) != D.identity(L(c)):
            rep.add(f"triangle identity fails at {c!r}")
    for d in D.objects():
        for d2 in D.objects():
            for g in D.hom(d, d2):
                if D.compose(g, epss[d]) != D.compose(epss[d2], L.map(R.map(g))):
                    rep.add(f"counit not natural at {g!r}")
        if C.compose(R.map(epss[d]), etas[R(d)]) != C.identity(R(d)):
            rep.add(f"triangle identity fails at {d!r}")
    return rep


def _component(fn: Callable, x, G: Groupoid, dom, cod, label: str, rep: Report):
    try:
        e = fn(x)
    except (ValidationError, KeyError, ValueError) as exc:
        rep.add(f"no {label} component at {x!r}: {exc}")
        return None
    if e is None or e not in G.hom(dom, cod):
        rep.add(f"{label} component at {x!r} is not a morphism {dom!r} → {cod!r}")
        return None
    return e


# -- dumps --------------------------------------------------------------------------------------------


def dump_distributor(d: Distributor, points: Iterable[tuple] | None = None) -> dict:
    A, B = d.source, d.target
    pts = list(points) if points is not None else [(a, b) for a in A.objects() for b in B.objects()]
    out = []
    for a, b in pts:
        ws = d.at(a, b)
        if ws:
            out.append({"source": repr(a), "target": repr(b), "count": len(ws),
                        "witnesses": [repr(w) for w in ws]})
    return {"name": d.name, "points": out}
