"""Non-idempotent intersection type derivations, their actions and congruence.

A judgement is ``x₁ : a⃗₁, …, x_n : a⃗_n ⊢ M : a``.  Contexts are tuples of
type tuples indexed by variable position; terms are first translated to a
positional form so that shadowing needs no special care.

Enumeration restricts every intermediate type that the rules leave free to
the canonical representative of its isomorphism class.  Every derivation is
congruent to one of this shape, so the class count is unaffected while the
derivation sets stay finite; :func:`free_enumeration` drops the restriction
over a small explicit universe and serves as an oracle for this.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from networkx.utils import UnionFind

from ..util import skey, ssorted
from . import itypes as T
from .terms import Term, free_vars, parse_term
from .terms import App as TApp
from .terms import Var as TVar

# -- positional terms ---------------------------------------------------------------------


def positional(t: Term, names: Sequence[str]) -> tuple:
    """``("v", level)``, ``("a", fun, arg)`` or ``("l", body)``; binders take the next level."""

    def go(u: Term, env: tuple) -> tuple:
        if isinstance(u, TVar):
            for lvl in range(len(env) - 1, -1, -1):
                if env[lvl] == u.name:
                    return ("v", lvl)
            raise KeyError(f"unbound variable {u.name}")
        if isinstance(u, TApp):
            return ("a", go(u.fun, env), go(u.arg, env))
        return ("l", go(u.body, env + (u.var,)))

    return go(t, tuple(names))


def free_levels(node: tuple, depth: int = 0) -> frozenset:
    """Levels below ``depth`` occurring free in ``node`` (``depth`` is the context length)."""
    return _free_levels(node, depth)


def _free_levels(node: tuple, n: int) -> frozenset:
    if node[0] == "v":
        return frozenset([node[1]]) if node[1] < n else frozenset()
    if node[0] == "a":
        return _free_levels(node[1], n) | _free_levels(node[2], n)
    return _free_levels(node[1], n)


def _levels(node: tuple) -> frozenset:
    if node[0] == "v":
        return frozenset([node[1]])
    if node[0] == "a":
        return _levels(node[1]) | _levels(node[2])
    return _levels(node[1])


# -- derivations ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ax:
    ctx: tuple
    typ: T.IType
    var: int
    f: T.Mor


@dataclass(frozen=True)
class Abs:
    ctx: tuple
    typ: T.IType
    body: "Derivation"
    f: T.Mor


@dataclass(frozen=True)
class Ap:
    ctx: tuple
    typ: T.IType
    fun: "Derivation"
    args: tuple
    eta: tuple


Derivation = Ax | Abs | Ap


def premise_args(d: Abs) -> tuple:
    return d.body.ctx[-1]


def premise_type(d: Abs) -> T.IType:
    return T.Arrow(premise_args(d), d.body.typ)


def fun_args(d: Ap) -> tuple:
    return d.fun.typ.args


def concat_ctx(parts: Sequence[tuple]) -> tuple:
    n = len(parts[0])
    return tuple(tuple(x for p in parts for x in p[v]) for v in range(n))


def ctx_identity(ctx: tuple) -> tuple:
    return tuple(T.seq_identity(s) for s in ctx)


def ctx_compose(g: tuple, f: tuple, star: bool = True) -> tuple:
    return tuple(T.seq_compose(gv, fv, star) for gv, fv in zip(g, f))


def ctx_inverse(f: tuple) -> tuple:
    return tuple(T.seq_inverse(fv) for fv in f)


def ctx_dom(f: tuple) -> tuple:
    return tuple(fv.dom for fv in f)


def ctx_cod(f: tuple) -> tuple:
    return tuple(fv.cod for fv in f)


def ctx_hom(src: tuple, dst: tuple, star: bool = True) -> list:
    return [tuple(c) for c in itertools.product(*(T.seq_hom(a, b, star) for a, b in zip(src, dst)))]


class DerivationError(ValueError):
    """A derivation or action with mismatched boundaries."""


def right(d: Derivation, theta: tuple, star: bool = True) -> Derivation:
    """``π{θ}`` for ``θ : δ' → ctx(π)``, a conclusion over ``δ'``."""
    if ctx_cod(theta) != d.ctx:
        raise DerivationError("right action: θ does not land in the context")
    new = ctx_dom(theta)
    if isinstance(d, Ax):
        g = theta[d.var].comps[0]
        return Ax(new, d.typ, d.var, T.compose(d.f, g, star))
    if isinstance(d, Abs):
        body = right(d.body, theta + (T.seq_identity(premise_args(d)),), star)
        return Abs(new, d.typ, body, d.f)
    return Ap(new, d.typ, d.fun, d.args, ctx_compose(d.eta, theta, star))


def left(g: T.Mor, d: Derivation, star: bool = True) -> Derivation:
    """``[g]π`` for ``g : typ(π) → b``."""
    if g.dom != d.typ:
        raise DerivationError("left action: g does not start at the conclusion type")
    if isinstance(d, Ax):
        return Ax(d.ctx, g.cod, d.var, T.compose(g, d.f, star))
    if isinstance(d, Abs):
        return Abs(d.ctx, g.cod, d.body, T.compose(g, d.f, star))
    lift = T.ArrMor(T.seq_identity(fun_args(d)), g)
    return Ap(d.ctx, g.cod, left(lift, d.fun, star), d.args, d.eta)


def check_derivation(d: Derivation, node: tuple | None = None, star: bool = True) -> None:
    """Every node is an instance of its rule; raises :class:`DerivationError`."""
    if isinstance(d, Ax):
        if node is not None and node != ("v", d.var):
            raise DerivationError("axiom on a non-variable")
        for v, s in enumerate(d.ctx):
            if len(s) != (1 if v == d.var else 0):
                raise DerivationError("axiom context must hold exactly the typed variable")
        if d.f.dom != d.ctx[d.var][0] or d.f.cod != d.typ:
            raise DerivationError("axiom morphism has the wrong endpoints")
        T.check(d.f, star)
    elif isinstance(d, Abs):
        if node is not None and node[0] != "l":
            raise DerivationError("abstraction on a non-abstraction")
        if d.body.ctx[:-1] != d.ctx:
            raise DerivationError("abstraction premise context mismatch")
        if d.f.dom != premise_type(d) or d.f.cod != d.typ:
            raise DerivationError("abstraction morphism has the wrong endpoints")
        T.check(d.f, star)
        check_derivation(d.body, None if node is None else node[1], star)
    else:
        if node is not None and node[0] != "a":
            raise DerivationError("application rule on a non-application")
        if not isinstance(d.fun.typ, T.Arrow) or d.fun.typ.res != d.typ:
            raise DerivationError("function premise has the wrong type")
        if len(d.args) != len(d.fun.typ.args):
            raise DerivationError("argument premise count mismatch")
        for a, t in zip(d.args, d.fun.typ.args):
            if a.typ != t:
                raise DerivationError("argument premise has the wrong type")
        target = concat_ctx([d.fun.ctx] + [a.ctx for a in d.args])
        if ctx_dom(d.eta) != d.ctx or ctx_cod(d.eta) != target:
            raise DerivationError("context morphism has the wrong endpoints")
        for s in d.eta:
            T.check_seq(s, star)
        check_derivation(d.fun, None if node is None else node[1], star)
        for a in d.args:
            check_derivation(a, None if node is None else node[2], star)


def size(d: Derivation) -> int:
    if isinstance(d, Ax):
        return 1
    if isinstance(d, Abs):
        return 1 + size(d.body)
    return 1 + size(d.fun) + sum(size(a) for a in d.args)


# -- enumeration -------------------------------------------------------------------------------


def subtypes(a: T.IType) -> set:
    """``a``, every curried result and every argument type, recursively."""
    out = {a}
    if isinstance(a, T.Arrow):
        out |= subtypes(a.res)
        for b in a.args:
            out |= subtypes(b)
    return out


def _multisets(atoms: Sequence, k: int) -> Iterator[tuple]:
    yield from itertools.combinations_with_replacement(atoms, k)


def _distributions(seq: tuple, buckets: int, allowed: Sequence[bool]) -> Iterator[tuple]:
    """Ordered splits of the multiset ``seq`` into sorted sub-multisets, one per bucket."""
    counts = sorted(Counter(seq).items(), key=lambda kv: skey(kv[0]))
    open_ = [i for i in range(buckets) if allowed[i]]
    if not counts:
        yield tuple(() for _ in range(buckets))
        return
    if not open_:
        return
    per_item = []
    for item, n in counts:
        options = []
        for comp in _compositions(n, len(open_)):
            options.append((item, comp))
        per_item.append(options)
    for choice in itertools.product(*per_item):
        parts = [[] for _ in range(buckets)]
        for item, comp in choice:
            for slot, c in zip(open_, comp):
                parts[slot].extend([item] * c)
        yield tuple(tuple(p) for p in parts)


def _compositions(n: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


@dataclass
class Enumerator:
    """Memoized derivation search over canonical intermediate types.

    ``atoms`` are the candidate argument types for applications and
    ``max_args`` bounds their number.
    """

    atoms: tuple
    max_args: int
    star: bool = True
    memo: dict = field(default_factory=dict)

    def canon(self, a: T.IType) -> T.IType:
        return T.canonical(a, self.star)

    def derive(self, node: tuple, ctx: tuple, typ: T.IType) -> tuple:
        key = (node, ctx, typ)
        hit = self.memo.get(key)
        if hit is None:
            hit = tuple(self._derive(node, ctx, typ))
            self.memo[key] = hit
        return hit

    def _derive(self, node: tuple, ctx: tuple, typ: T.IType) -> Iterator[Derivation]:
        kind = node[0]
        if kind == "v":
            lvl = node[1]
            if lvl >= len(ctx) or len(ctx[lvl]) != 1:
                return
            if any(s for v, s in enumerate(ctx) if v != lvl):
                return
            for f in T.hom(ctx[lvl][0], typ, self.star):
                yield Ax(ctx, typ, lvl, f)
            return
        if kind == "l":
            c = self.canon(typ)
            args, res = (c.args, c.res) if isinstance(c, T.Arrow) else ((), T.STAR)
            fs = T.hom(T.Arrow(args, res), typ, self.star)
            if not fs:
                return
            bodies = self.derive(node[1], ctx + (args,), res)
            for f in fs:
                for b in bodies:
                    yield Abs(ctx, typ, b, f)
            return
        fun, arg = node[1], node[2]
        used_fun, used_arg = _levels(fun), _levels(arg)
        if any(s for v, s in enumerate(ctx) if v not in used_fun and v not in used_arg):
            return
        canon_ctx = tuple(T.canonical_seq(s, self.star) for s in ctx)
        for k in range(self.max_args + 1):
            for avec in _multisets(self.atoms, k):
                ftyp = T.Arrow(tuple(avec), typ)
                per_var = []
                for v, s in enumerate(canon_ctx):
                    allowed = [v in used_fun] + [v in used_arg] * k
                    per_var.append(list(_distributions(s, k + 1, allowed)))
                for split in itertools.product(*per_var):
                    parts = [tuple(split[v][j] for v in range(len(ctx))) for j in range(k + 1)]
                    funs = self.derive(fun, parts[0], ftyp)
                    if not funs:
                        continue
                    argds = [self.derive(arg, parts[j + 1], avec[j]) for j in range(k)]
                    if any(not a for a in argds):
                        continue
                    etas = ctx_hom(ctx, concat_ctx(parts), self.star)
                    for fd in funs:
                        for ads in itertools.product(*argds):
                            for eta in etas:
                                yield Ap(ctx, typ, fd, tuple(ads), eta)


def atoms_for(ctx: tuple, typ: T.IType, star: bool = True) -> tuple:
    found: set = {T.STAR}
    for a in [typ] + [b for s in ctx for b in s]:
        for b in subtypes(a):
            found.add(T.canonical(b, star))
    return tuple(ssorted(found))


def widen_atoms(atoms: Iterable[T.IType], max_args: int, rounds: int = 1, star: bool = True) -> tuple:
    """Add ``⃗b ⊸ *`` for every multiset ``⃗b`` of at most ``max_args`` atoms, ``rounds`` times.

    Point subtypes cannot type the argument of a redex whose type is erased
    by reduction; a round or two of widening covers small cases.
    """
    found = set(atoms)
    for _ in range(rounds):
        base = ssorted(found)
        for k in range(1, max_args + 1):
            for args in _multisets(base, k):
                found.add(T.canonical(T.Arrow(tuple(args), T.STAR), star))
    return tuple(ssorted(found))


def bounds_for(ctx: tuple, typ: T.IType) -> int:
    return max([T.width(typ)] + [len(s) for s in ctx] + [T.width(b) for s in ctx for b in s] + [1])


def enumerate_derivations(term: Term | str, names: Sequence[str], ctx: Sequence[Sequence[T.IType]],
                          typ: T.IType, star: bool = True, max_args: int | None = None,
                          atoms: Iterable[T.IType] | None = None) -> tuple:
    """All derivations of ``names : ctx ⊢ term : typ`` with canonical intermediate types."""
    if isinstance(term, str):
        term = parse_term(term, free=names)
    ctx = tuple(tuple(s) for s in ctx)
    if len(ctx) != len(names):
        raise ValueError("one type sequence per variable is required")
    missing = [v for v in free_vars(term) if v not in names]
    if missing:
        raise ValueError(f"context does not cover {', '.join(missing)}")
    node = positional(term, names)
    en = Enumerator(
        tuple(ssorted(atoms)) if atoms is not None else atoms_for(ctx, typ, star),
        max_args if max_args is not None else bounds_for(ctx, typ),
        star,
    )
    return tuple(ssorted(en.derive(node, ctx, typ)))


def free_enumeration(term: Term | str, names: Sequence[str], ctx, typ, universe: Iterable[T.IType],
                     star: bool = True, max_args: int = 2) -> tuple:
    """Derivations whose intermediate types range over all of ``universe``, canonical or not.

    Exponential; an independent check of the canonical restriction on tiny cases.
    """
    if isinstance(term, str):
        term = parse_term(term, free=names)
    universe = tuple(ssorted(set(universe)))
    node = positional(term, names)
    memo: dict = {}

    def seqs(k: int) -> Iterator[tuple]:
        yield from itertools.product(universe, repeat=k)

    def derive(node: tuple, ctx: tuple, typ) -> tuple:
        key = (node, ctx, typ)
        if key not in memo:
            memo[key] = tuple(_derive(node, ctx, typ))
        return memo[key]

    def _derive(node, ctx, typ):
        if node[0] == "v":
            lvl = node[1]
            if len(ctx[lvl]) == 1 and not any(s for v, s in enumerate(ctx) if v != lvl):
                for f in T.hom(ctx[lvl][0], typ, star):
                    yield Ax(ctx, typ, lvl, f)
            return
        if node[0] == "l":
            for k in range(max_args + 1):
                for args in seqs(k):
                    for res in universe:
                        fs = T.hom(T.Arrow(args, res), typ, star)
                        if not fs:
                            continue
                        for b in derive(node[1], ctx + (args,), res):
                            for f in fs:
                                yield Abs(ctx, typ, b, f)
            return
        fun, arg = node[1], node[2]
        for k in range(max_args + 1):
            for avec in seqs(k):
                for parts in _free_splits(ctx, k + 1, universe):
                    funs = derive(fun, parts[0], T.Arrow(avec, typ))
                    argds = [derive(arg, parts[j + 1], avec[j]) for j in range(k)]
                    if not funs or any(not a for a in argds):
                        continue
                    for eta in ctx_hom(ctx, concat_ctx(parts), star):
                        for fd in funs:
                            for ads in itertools.product(*argds):
                                yield Ap(ctx, typ, fd, tuple(ads), eta)

    return tuple(ssorted(derive(node, tuple(tuple(s) for s in ctx), typ)))


def _free_splits(ctx: tuple, buckets: int, universe: tuple) -> Iterator[list]:
    """Context tuples over ``universe`` whose concatenation has the size of ``ctx``, per variable."""
    per_var = []
    for s in ctx:
        opts = []
        for sizes in _compositions(len(s), buckets):
            for parts in itertools.product(*(itertools.product(universe, repeat=n) for n in sizes)):
                opts.append(parts)
        per_var.append(opts)
    for choice in itertools.product(*per_var):
        yield [tuple(choice[v][j] for v in range(len(ctx))) for j in range(buckets)]


# -- congruence -------------------------------------------------------------------------------


def _block_permutation(parts: Sequence[tuple], perm: Sequence[int]) -> tuple:
    """``id ⊗ σ*`` per variable: reorders blocks ``1..k`` so block ``i`` comes from ``perm[i]``."""
    n = len(parts[0])
    out = []
    for v in range(n):
        offsets, pos = [], 0
        for p in parts:
            offsets.append(pos)
            pos += len(p[v])
        order = [0] + [1 + j for j in perm]
        idx, cod = [], []
        for b in order:
            for t in range(len(parts[b][v])):
                idx.append(offsets[b] + t)
                cod.append(parts[b][v][t])
        dom = tuple(x for p in parts for x in p[v])
        out.append(T.SeqMor(tuple(idx), tuple(T.identity(c) for c in cod), dom, tuple(cod)))
    return tuple(out)


@dataclass(frozen=True)
class Moves:
    """Which retypings the congruence rules may try.

    In the canonical search every intermediate type is already the chosen
    representative, so automorphisms suffice; the free oracle passes a
    ``universe`` and the rules then also move to any isomorphic type in it.
    """

    star: bool = True
    universe: tuple = ()

    def seqs(self, seq: tuple) -> Iterator[tuple]:
        if not self.universe:
            yield seq
            return
        target = T.canonical_seq(seq, self.star)
        for cand in itertools.product(self.universe, repeat=len(seq)):
            if T.canonical_seq(cand, self.star) == target:
                yield cand

    def types(self, a: T.IType) -> Iterator[T.IType]:
        if not self.universe:
            yield a
            return
        for b in self.universe:
            if T.isomorphic(a, b, self.star):
                yield b


def _single_var_isos(ctx: tuple, moves: Moves) -> Iterator[tuple]:
    """Context isomorphisms out of ``ctx`` that are the identity outside one variable."""
    ident = ctx_identity(ctx)
    for v, s in enumerate(ctx):
        for s2 in moves.seqs(s):
            for m in T.seq_hom(s, s2, moves.star):
                if m != ident[v]:
                    yield ident[:v] + (m,) + ident[v + 1:]


def rule_app(d: Derivation, moves: Moves) -> Iterator[Derivation]:
    """Argument reindexing: ``[f⃗^σ ⊸ id]π₀`` against permuted, retyped arguments."""
    if not isinstance(d, Ap):
        return
    star = moves.star
    avec = fun_args(d)
    parts = [d.fun.ctx] + [a.ctx for a in d.args]
    for bvec in moves.seqs(avec):
        for s in T.seq_hom(avec, bvec, star):
            if s == T.seq_identity(avec):
                continue
            fun = left(T.ArrMor(T.seq_inverse(s), T.identity(d.typ)), d.fun, star)
            args = tuple(left(s.comps[i], d.args[s.perm[i]], star) for i in range(len(avec)))
            eta = ctx_compose(_block_permutation(parts, s.perm), d.eta, star)
            yield Ap(d.ctx, d.typ, fun, args, eta)


def rule_ctx(d: Derivation, moves: Moves) -> Iterator[Derivation]:
    """Moving a context isomorphism between a premise and the context morphism."""
    if not isinstance(d, Ap):
        return
    star = moves.star
    prem = [d.fun] + list(d.args)
    for j, p in enumerate(prem):
        for theta in _single_var_isos(p.ctx, moves):
            # θ : γ_j → γ'_j, and π_j over γ'_j is π_j{θ⁻¹}
            moved = right(p, ctx_inverse(theta), star)
            blocks = [ctx_identity(q.ctx) if i != j else theta for i, q in enumerate(prem)]
            eta = ctx_compose(_concat_mors(blocks), d.eta, star)
            new = prem[:j] + [moved] + prem[j + 1:]
            yield Ap(d.ctx, d.typ, new[0], tuple(new[1:]), eta)


def _concat_mors(blocks: Sequence[tuple]) -> tuple:
    """``⊗_j θ_j`` per variable as a single sequence morphism."""
    n = len(blocks[0])
    out = []
    for v in range(n):
        perm, comps, dom, cod, off = [], [], [], [], 0
        for b in blocks:
            m = b[v]
            perm.extend(off + p for p in m.perm)
            comps.extend(m.comps)
            dom.extend(m.dom)
            cod.extend(m.cod)
            off += len(m.dom)
        out.append(T.SeqMor(tuple(perm), tuple(comps), tuple(dom), tuple(cod)))
    return tuple(out)


def rule_abs(d: Derivation, moves: Moves) -> Iterator[Derivation]:
    """Moving an isomorphism of the premise type ``a⃗ ⊸ a`` into the abstraction morphism."""
    if not isinstance(d, Abs):
        return
    star = moves.star
    pt = premise_type(d)
    for args2 in moves.seqs(pt.args):
        for res2 in moves.types(pt.res):
            pt2 = T.Arrow(args2, res2)
            for m in T.hom(pt, pt2, star):
                if m == T.identity(pt) or not isinstance(m, T.ArrMor):
                    continue
                ident = ctx_identity(d.ctx)
                body = left(m.res, right(d.body, ident + (m.args,), star), star)
                yield Abs(d.ctx, d.typ, body, T.compose(d.f, T.inverse(m), star))


RULES: tuple[Callable, ...] = (rule_app, rule_ctx, rule_abs)


def neighbours(d: Derivation, moves: Moves, rules: Sequence[Callable] = RULES,
               memo: dict | None = None) -> tuple:
    """One-step congruence moves at the root or inside any premise."""
    memo = {} if memo is None else memo
    if d in memo:
        return memo[d]
    out: list = []
    for rule in rules:
        out.extend(rule(d, moves))
    if isinstance(d, Abs):
        out.extend(Abs(d.ctx, d.typ, b, d.f) for b in neighbours(d.body, moves, rules, memo))
    elif isinstance(d, Ap):
        out.extend(Ap(d.ctx, d.typ, f, d.args, d.eta) for f in neighbours(d.fun, moves, rules, memo))
        for i, a in enumerate(d.args):
            for a2 in neighbours(a, moves, rules, memo):
                out.append(Ap(d.ctx, d.typ, d.fun, d.args[:i] + (a2,) + d.args[i + 1:], d.eta))
    memo[d] = tuple(out)
    return memo[d]


def classes_union_find(derivs: Sequence[Derivation], moves: Moves | None = None) -> list[list]:
    """Congruence classes by union-find over all one-step moves."""
    moves = moves or Moves()
    members = set(derivs)
    uf = UnionFind(derivs)
    memo: dict = {}
    for d in derivs:
        for n in neighbours(d, moves, RULES, memo):
            if n not in members:
                raise DerivationError("a congruence move left the enumerated set")
            uf.union(d, n)
    return _sorted_partition(uf.to_sets())


def classes_orbits(derivs: Sequence[Derivation], moves: Moves | None = None) -> list[list]:
    """Congruence classes by breadth-first orbit search with the rules in reverse order."""
    moves = moves or Moves()
    rules = tuple(reversed(RULES))
    seen: set = set()
    out = []
    memo: dict = {}
    for d in reversed(list(derivs)):
        if d in seen:
            continue
        orbit = {d}
        queue = deque([d])
        while queue:
            x = queue.popleft()
            for n in neighbours(x, moves, rules, memo):
                if n not in orbit:
                    orbit.add(n)
                    queue.append(n)
        seen |= orbit
        out.append(orbit)
    return _sorted_partition(out)


def _sorted_partition(sets: Iterable[Iterable]) -> list[list]:
    parts = [ssorted(s) for s in sets]
    return sorted(parts, key=lambda p: skey(p[0]))


# -- intersection type distributor -------------------------------------------------------------


@dataclass
class ITD:
    """Classes of derivations of one judgement, with the induced point actions."""

    term: Term
    names: tuple
    ctx: tuple
    typ: T.IType
    derivations: tuple
    classes: list
    star: bool = True

    def __post_init__(self):
        self.index = {d: i for i, cls in enumerate(self.classes) for d in cls}

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def representatives(self) -> list:
        return [cls[0] for cls in self.classes]

    def class_of(self, d: Derivation) -> int:
        return self.index[d]

    def act(self, theta: tuple, g: T.Mor, cls: int) -> int:
        """The class of ``[g]π{θ⁻¹}`` for ``π`` in class ``cls``; ``θ`` and ``g`` are point automorphisms."""
        d = self.classes[cls][0]
        return self.index[left(g, right(d, ctx_inverse(theta), self.star), self.star)]

    def point_automorphisms(self) -> list[tuple]:
        return [(theta, g) for theta in ctx_hom(self.ctx, self.ctx, self.star)
                for g in T.hom(self.typ, self.typ, self.star)]


def itd(term: Term | str, names: Sequence[str], ctx, typ: T.IType, star: bool = True,
        max_args: int | None = None, widen: int = 0) -> ITD:
    """Derivation classes at ``(ctx, typ)``; ``widen`` rounds of :func:`widen_atoms` for redexes."""
    if isinstance(term, str):
        term = parse_term(term, free=names)
    ctx = tuple(tuple(s) for s in ctx)
    atoms = None
    if widen:
        k = max_args if max_args is not None else bounds_for(ctx, typ)
        atoms = widen_atoms(atoms_for(ctx, typ, star), k, widen, star)
    derivs = enumerate_derivations(term, names, ctx, typ, star, max_args, atoms)
    return ITD(term, tuple(names), ctx, typ, derivs, classes_union_find(derivs, Moves(star)), star)


def parse_point(text: str) -> tuple[tuple, T.IType]:
    """``seq;…;seq;type``: one type sequence per variable, then the result type."""
    pieces = [p.strip() for p in text.split(";")]
    ctx = tuple(T.parse_seq(p) for p in pieces[:-1])
    return ctx, T.parse_type(pieces[-1])


def show_point(ctx: tuple, typ: T.IType) -> str:
    return ";".join([T.show_seq(s) for s in ctx] + [T.show_type(typ)])
