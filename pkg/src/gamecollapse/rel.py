"""The relational model, its proof-relevant refinement, and a micro-PCF.

Multisets are sorted tuples.  A proof-relevant relation is a dict from
pairs to tuples of witnesses; the plain relation is its support.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .util import ssorted, skey

Mset = tuple


def mset(items: Iterable = ()) -> Mset:
    return tuple(ssorted(items))


def msum(*ms: Mset) -> Mset:
    return mset(x for m in ms for x in m)


def msets(base: Iterable, max_size: int) -> list[Mset]:
    """All multisets over ``base`` with at most ``max_size`` elements."""
    elems = ssorted(set(base))
    out = []
    for n in range(max_size + 1):
        out.extend(itertools.combinations_with_replacement(elems, n))
    return [mset(m) for m in out]


def msub(big: Mset, small: Mset) -> Mset | None:
    """``big - small`` or None when ``small`` is not contained in ``big``."""
    c = Counter(big)
    c.subtract(Counter(small))
    if any(v < 0 for v in c.values()):
        return None
    return mset(c.elements())


# -- relations -----------------------------------------------------------------


def rel_identity(a: Iterable) -> frozenset:
    return frozenset((x, x) for x in a)


def rel_compose(r: Iterable[tuple], s: Iterable[tuple]) -> frozenset:
    """``s ∘ r``."""
    by_mid: dict = {}
    for b, c in s:
        by_mid.setdefault(b, []).append(c)
    return frozenset((a, c) for a, b in r for c in by_mid.get(b, ()))


def prrel_compose(alpha: Mapping, beta: Mapping) -> dict:
    """``Σ_b α(a,b) × β(b,c)`` with witnesses as pairs."""
    by_mid: dict = {}
    for (b, c), ws in beta.items():
        by_mid.setdefault(b, []).append((c, ws))
    out: dict = {}
    for (a, b), xs in alpha.items():
        for c, ys in by_mid.get(b, ()):
            out.setdefault((a, c), []).extend((x, y) for x in xs for y in ys)
    return {k: tuple(v) for k, v in out.items() if v}


def support(prrel: Mapping) -> frozenset:
    return frozenset(k for k, v in prrel.items() if v)


def rel_promote(r: Iterable[tuple], max_size: int) -> frozenset:
    """``r! ⊆ M(A) × M(B)``: sums of ``r``-related pairs, at most ``max_size`` summands."""
    pairs = ssorted(set(r))
    out = {((), ())}
    for n in range(1, max_size + 1):
        for combo in itertools.combinations_with_replacement(pairs, n):
            out.add((msum(*(m for m, _ in combo)), mset(b for _, b in combo)))
    return frozenset(out)


def rel_kleisli(r: Iterable[tuple], s: Iterable[tuple], max_size: int) -> frozenset:
    """Composite in ``Rel_!`` of ``r ⊆ M(A)×B`` then ``s ⊆ M(B)×C``."""
    return rel_compose(rel_promote(r, max_size), s)


def seely(m: Mset) -> tuple[Mset, Mset]:
    """``M(A + B) → M(A) × M(B)`` for elements tagged ``(1, a)`` / ``(2, b)``."""
    return mset(x for t, x in m if t == 1), mset(x for t, x in m if t == 2)


def seely_inverse(ma: Mset, mb: Mset) -> Mset:
    return mset([(1, x) for x in ma] + [(2, x) for x in mb])


# -- micro-PCF -------------------------------------------------------------------------


@dataclass(frozen=True)
class Bool:
    def __repr__(self) -> str:
        return "B"


@dataclass(frozen=True)
class Fun:
    arg: object
    res: object

    def __repr__(self) -> str:
        return f"({self.arg!r} -> {self.res!r})"


BOOL = Bool()


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PConst:
    value: str  # "tt" or "ff"


@dataclass(frozen=True)
class PChoice:
    pass


@dataclass(frozen=True)
class PIf:
    cond: object
    then: object
    orelse: object


@dataclass(frozen=True)
class PLam:
    var: str
    ty: object
    body: object


@dataclass(frozen=True)
class PApp:
    fun: object
    arg: object


def web(ty, bound: int) -> list:
    """Points of the interpretation of a type (multisets bounded by ``bound``)."""
    if isinstance(ty, Bool):
        return ["ff", "tt"]
    return [(m, b) for m in msets(web(ty.arg, bound), bound) for b in web(ty.res, bound)]


def type_of(term, env: Mapping):
    if isinstance(term, PVar):
        return env[term.name]
    if isinstance(term, (PConst, PChoice)):
        return BOOL
    if isinstance(term, PIf):
        if type_of(term.cond, env) != BOOL:
            raise TypeError("condition must be boolean")
        t1, t2 = type_of(term.then, env), type_of(term.orelse, env)
        if t1 != t2:
            raise TypeError("branches differ in type")
        return t1
    if isinstance(term, PLam):
        return Fun(term.ty, type_of(term.body, {**env, term.var: term.ty}))
    if isinstance(term, PApp):
        ft = type_of(term.fun, env)
        if not isinstance(ft, Fun) or type_of(term.arg, env) != ft.arg:
            raise TypeError("ill-typed application")
        return ft.res
    raise TypeError(f"unknown term {term!r}")


Ctx = tuple  # one multiset per variable, in the order of ``names``


def _ctx_sum(a: Ctx, b: Ctx) -> Ctx:
    return tuple(msum(x, y) for x, y in zip(a, b))


def interpret(term, names: tuple = (), env: Mapping | None = None, bound: int = 2) -> dict:
    """Proof-relevant interpretation: ``{(ctx, value): witnesses}``.

    ``ctx`` holds one multiset per name.  Witnesses are derivation trees,
    so distinct evaluation paths to the same point stay distinct.  All
    multisets (contexts included) are capped at ``bound`` elements.
    """
    env = dict(env or {})
    empty = tuple(() for _ in names)
    out_local: dict = {}

    def add(point, w):
        out_local.setdefault(point, []).append(w)

    if isinstance(term, PVar):
        i = names.index(term.name)
        for v in web(env[term.name], bound):
            ctx = tuple((v,) if j == i else () for j in range(len(names)))
            add((ctx, v), ("var", term.name))
        return _freeze(out_local)
    if isinstance(term, PConst):
        return {(empty, term.value): (("const", term.value),)}
    if isinstance(term, PChoice):
        return {(empty, "tt"): (("choice", "tt"),), (empty, "ff"): (("choice", "ff"),)}
    if isinstance(term, PIf):
        cond = interpret(term.cond, names, env, bound)
        branches = {"tt": interpret(term.then, names, env, bound), "ff": interpret(term.orelse, names, env, bound)}
        for (c1, b), w1s in cond.items():
            for (c2, v), w2s in branches[b].items():
                ctx = _ctx_sum(c1, c2)
                if any(len(m) > bound for m in ctx):
                    continue
                for w1 in w1s:
                    for w2 in w2s:
                        add((ctx, v), ("if", w1, b, w2))
        return _freeze(out_local)
    if isinstance(term, PLam):
        inner = interpret(term.body, names + (term.var,), {**env, term.var: term.ty}, bound)
        for (ctx, v), ws in inner.items():
            for w in ws:
                add((ctx[:-1], (ctx[-1], v)), ("lam", w))
        return _freeze(out_local)
    if isinstance(term, PApp):
        fun = interpret(term.fun, names, env, bound)
        arg = interpret(term.arg, names, env, bound)
        by_value: dict = {}
        for (ctx, v), ws in arg.items():
            for w in ws:
                by_value.setdefault(v, []).append((ctx, w))
        for (c0, (m, b)), w0s in fun.items():
            for parts in _multiset_choices(m, by_value):
                ctx = c0
                for c, _ in parts:
                    ctx = _ctx_sum(ctx, c)
                if any(len(x) > bound for x in ctx):
                    continue
                for w0 in w0s:
                    add((ctx, b), ("app", w0, tuple(parts)))
        return _freeze(out_local)
    raise TypeError(f"unknown term {term!r}")


def _multiset_choices(m: Mset, by_value: Mapping) -> Iterator[tuple]:
    """Multisets of argument witnesses whose values sum to ``m``.

    Each element of the result is a sorted tuple of ``(ctx, witness)``;
    grouping equal values and choosing with repetition keeps one
    representative per multiset.
    """
    groups = Counter(m)
    per_value = []
    for v, k in sorted(groups.items(), key=lambda p: skey(p[0])):
        opts = ssorted(by_value.get(v, ()))
        per_value.append(list(itertools.combinations_with_replacement(opts, k)))
    for combo in itertools.product(*per_value):
        yield tuple(ssorted(x for group in combo for x in group))


def _freeze(d: dict) -> dict:
    return {k: tuple(ssorted(v)) for k, v in d.items()}


def interpret_rel(term, names: tuple = (), env: Mapping | None = None, bound: int = 2) -> frozenset:
    return support(interpret(term, names, env, bound))


def closed_points(prrel: Mapping) -> dict:
    """Drop the (empty) context of a closed term's interpretation."""
    return {v: ws for (ctx, v), ws in prrel.items()}
