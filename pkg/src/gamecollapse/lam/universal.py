"""The universal arena ``U = ⊗ !U ⊸ o``, truncated, and its translation to D*.

``u_game(level, width)`` is ``o`` at level 0 and
``⊗_{i<width} bang(U(level-1), width) ⊸ o`` above.  Inside ``U`` a move is
addressed by its *path*: the ``(slot, copy)`` choices leading from the root
to it, so ``()`` is the root and ``((i, j),)`` the root of copy ``j`` of
slot ``i``.

A complete configuration is a finite tree of such paths.  ``to_type``
reads it as a type (slots become curried arguments, copies in increasing
order become sequences) and ``to_config`` goes back, placing the ``p``-th
element of each sequence at copy ``p``.  Empty trailing slots leave no
trace, which is why ``⟨⟩ ⊸ *`` and ``*`` have the same configuration.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from ..dist import FamilyGroupoid, Functor, Groupoid, groupoid_equivalence_check
from ..games import Game, bang, empty_board, hom, lolli, o_board, tensor_all
from ..symmetry import SymBijection
from ..util import Report, TruncationError, ssorted
from . import itypes as T

# -- games -------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def u_game(level: int, width: int) -> Game:
    if level < 0 or width < 1:
        raise ValueError("U needs level >= 0 and width >= 1")
    if level == 0:
        g = o_board()
        g.name = "U0"
        return g
    below = bang(u_game(level - 1, width), width)
    g = lolli(tensor_all([below] * width), o_board())
    g.name = f"U{level}"
    return g


@lru_cache(maxsize=None)
def context_game(nvars: int, level: int, width: int) -> Game:
    """``!U`` for one variable, a tensor of them for several, ``I`` for none."""
    if nvars == 0:
        return empty_board()
    u = u_game(level, width)
    if nvars == 1:
        return bang(u, width)
    return tensor_all([bang(u, width) for _ in range(nvars)], name=f"ctx{nvars}")


@lru_cache(maxsize=None)
def term_game(nvars: int, level: int, width: int) -> Game:
    return hom(context_game(nvars, level, width), u_game(level, width))


# -- addresses ---------------------------------------------------------------------------------


def u_event(path: tuple, level: int):
    """The move of ``u_game(level, ·)`` at ``path``; the root of ``U0`` is plain ``0``."""
    if not path:
        return (1, 0) if level > 0 else 0
    (i, j), rest = path[0], path[1:]
    return (0, 0, (i, (j, u_event(rest, level - 1))))


def u_path(e) -> tuple:
    out = []
    while e != 0 and e[0] == 0:
        i, (j, e) = e[2]
        out.append((i, j))
    return tuple(out)


def address_event(addr: tuple, nvars: int, level: int) -> tuple:
    """``("res", path)`` or ``("ctx", var, copy, path)`` as a move of :func:`term_game`."""
    if addr[0] == "res":
        return (1, u_event(addr[1], level))
    _, v, j, path = addr
    inner = (j, u_event(path, level))
    return (0, inner if nvars == 1 else (v, inner))


def event_address(e: tuple, nvars: int) -> tuple:
    if e[0] == 1:
        return ("res", u_path(e[1]))
    inner = e[1]
    v = 0
    if nvars != 1:
        v, inner = inner
    j, u = inner
    return ("ctx", v, j, u_path(u))


def shape(addr: tuple) -> tuple:
    """The address with copy indices erased."""
    if addr[0] == "res":
        return ("res", tuple(i for i, _ in addr[1]))
    return ("ctx", addr[1], tuple(i for i, _ in addr[3]))


# -- types to configurations ----------------------------------------------------------------


def type_paths(a: T.IType) -> frozenset:
    out = {()}
    for i, seq in enumerate(T.arguments(a)):
        for j, b in enumerate(seq):
            out |= {((i, j),) + p for p in type_paths(b)}
    return frozenset(out)


def fits(a: T.IType, level: int, width: int) -> bool:
    for seq in T.arguments(a):
        if not seq:
            continue
        if level < 1 or len(seq) > width:
            return False
        if any(not fits(b, level - 1, width) for b in seq):
            return False
    slots = [i for i, s in enumerate(T.arguments(a)) if s]
    return not slots or max(slots) < width


def to_config(a: T.IType, level: int, width: int) -> frozenset:
    """``R(a)``, a complete configuration of ``u_game(level, width)``."""
    if not fits(a, level, width):
        raise TruncationError(f"{T.show_type(a)} does not fit U at level {level}, width {width}")
    return frozenset(u_event(p, level) for p in type_paths(a))


def _children(paths: Iterable[tuple]) -> dict:
    kids: dict = {}
    for p in paths:
        if p:
            kids.setdefault(p[0], set()).add(p[1:])
    return kids


def paths_type(paths: Iterable[tuple]) -> T.IType:
    kids = _children(paths)
    if not kids:
        return T.STAR
    nslots = max(i for i, _ in kids) + 1
    seqs = []
    for i in range(nslots):
        copies = sorted(j for s, j in kids if s == i)
        seqs.append(tuple(paths_type(kids[(i, j)]) for j in copies))
    return T.from_arguments(seqs)


def to_type(x: Iterable[tuple]) -> T.IType:
    """``L(x)`` for a complete configuration ``x`` of some ``u_game``."""
    return paths_type(u_path(e) for e in x)


# -- morphisms -----------------------------------------------------------------------------------


def mor_paths(m: T.Mor) -> dict:
    """``R(m)`` as a map from the paths of ``R(dom m)`` to those of ``R(cod m)``."""
    if isinstance(m, (T.StarId, T.Up, T.Down)):
        return {(): ()}
    out = {(): ()}
    s = m.args
    for i in range(len(s.perm)):
        sub = mor_paths(T.inverse(s.comps[i]))
        for p, q in sub.items():
            out[((0, i),) + p] = ((0, s.perm[i]),) + q
    for p, q in mor_paths(m.res).items():
        if p:
            (i, j), (i2, j2) = p[0], q[0]
            out[((i + 1, j),) + p[1:]] = ((i2 + 1, j2),) + q[1:]
    return out


def seq_mor_paths(s: T.SeqMor) -> dict:
    """``R`` of a sequence morphism: ``(copy, path) ↦ (copy, path)``."""
    out = {}
    for i in range(len(s.perm)):
        for p, q in mor_paths(s.comps[i]).items():
            out[(s.perm[i], p)] = (i, q)
    return out


def to_symmetry(m: T.Mor, level: int) -> SymBijection:
    return SymBijection(frozenset((u_event(p, level), u_event(q, level)) for p, q in mor_paths(m).items()))


def paths_mor(x: frozenset, y: frozenset, theta: dict) -> T.Mor:
    """``L(θ) : L(x) → L(y)`` for a slot-preserving path bijection ``θ``."""
    kx, ky = _children(x), _children(y)
    if not kx:
        return T.ID_STAR
    nslots = max(i for i, _ in kx) + 1
    inv = {q: p for p, q in theta.items()}
    seqs = []
    for i in range(nslots):
        cx = sorted(j for s, j in kx if s == i)
        cy = sorted(j for s, j in ky if s == i)
        perm, comps = [], []
        for p, j in enumerate(cx):
            (_, j2) = theta[((i, j),)][0]
            perm.append(cy.index(j2))
            sub = {a[1:]: b[1:] for a, b in inv.items() if a[:1] == ((i, j2),)}
            comps.append(paths_mor(ky[(i, j2)], kx[(i, j)], sub))
        dom = tuple(paths_type(ky[(i, j)]) for j in cy)
        cod = tuple(paths_type(kx[(i, j)]) for j in cx)
        seqs.append(T.SeqMor(tuple(perm), tuple(comps), dom, cod))
    m: T.Mor = T.ID_STAR
    for s in reversed(seqs):
        m = T.ArrMor(s, m)
    return m


def to_mor(theta: SymBijection) -> T.Mor:
    """``L(θ)`` for a symmetry between complete configurations of U."""
    paths = {u_path(a): u_path(b) for a, b in theta.pairs}
    return paths_mor(frozenset(paths), frozenset(paths.values()), paths)


def reindex_paths(x: frozenset) -> dict:
    """The monotone renumbering of copies making them consecutive, at every node."""
    out = {(): ()}
    kids = _children(x)
    for (i, j), sub in kids.items():
        rank = sorted(c for s, c in kids if s == i).index(j)
        for p, q in reindex_paths(frozenset(sub)).items():
            out[((i, j),) + p] = ((i, rank),) + q
    return out


def collapse_unit(a: T.IType) -> T.Mor:
    """The isomorphism ``L(R(a)) → a``, using ``e`` for trailing ``⟨⟩ ⊸ *``."""
    if isinstance(a, T.Star):
        return T.ID_STAR
    inner = collapse_unit(a.res)
    if not a.args and isinstance(inner.dom, T.Star):
        return T.Up(inner)
    args = tuple(collapse_unit(b) for b in a.args)
    s = T.SeqMor(tuple(range(len(args))), tuple(T.inverse(c) for c in args),
                 tuple(b for b in a.args), tuple(c.dom for c in args))
    return T.ArrMor(s, inner)


# -- the equivalence, checked ---------------------------------------------------------------------


class DStar(Groupoid):
    """A finite full subgroupoid of D* (or D) on the listed types."""

    def __init__(self, objects: Iterable[T.IType], star: bool = True, name: str = "D*"):
        self._objects = ssorted(set(objects))
        self.star = star
        self.name = name

    def objects(self) -> list:
        return self._objects

    def hom(self, a, b) -> tuple:
        return T.hom(a, b, self.star)

    def compose(self, g, f):
        return T.compose(g, f, self.star)

    def identity(self, a):
        return T.identity(a)

    def inverse(self, f):
        return T.inverse(f)

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod


def required_truncation(ctx: Sequence[tuple], typ: T.IType) -> tuple[int, int]:
    """``(depth, width)`` of the point read as the single type ``δ₁ ⊸ … ⊸ δ_n ⊸ a``."""
    whole = typ
    for seq in reversed(list(ctx)):
        whole = T.Arrow(tuple(seq), whole)
    return max(T.depth(whole), 1), max(T.width(whole), 1)


def equivalence_check(types: Iterable[T.IType], level: int, width: int,
                      extra: Iterable[frozenset] = ()) -> Report:
    """``L ⊣ R`` as an adjoint equivalence between sampled configurations and types.

    Both object lists are closed under the round trips so the functors are total.
    """
    game = u_game(level, width)
    types = [a for a in types if fits(a, level, width)]
    confs = {to_config(a, level, width) for a in types} | set(extra)
    confs |= {to_config(to_type(x), level, width) for x in list(confs)}
    objs = set(types) | {to_type(x) for x in confs}
    objs |= {to_type(to_config(a, level, width)) for a in list(objs)}
    confs |= {to_config(a, level, width) for a in objs}
    C = FamilyGroupoid(game.tilde, ssorted(confs), name=f"C0~(U{level})")
    D = DStar(objs)
    L = Functor(C, D, to_type, to_mor, name="L")
    R = Functor(D, C, lambda a: to_config(a, level, width), lambda m: to_symmetry(m, level), name="R")

    def unit(x: frozenset) -> SymBijection:
        m = reindex_paths(frozenset(u_path(e) for e in x))
        return SymBijection(frozenset((u_event(p, level), u_event(q, level)) for p, q in m.items()))

    return groupoid_equivalence_check(L, R, unit, collapse_unit, name=f"L ⊣ R at U{level}, width {width}")
