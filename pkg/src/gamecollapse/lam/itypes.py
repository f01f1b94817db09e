"""Intersection types and proof-relevant subtyping, with and without ``e : * ≅ ⟨⟩ ⊸ *``.

Types are ``*`` and ``⟨a₁ … a_k⟩ ⊸ a``.  Morphisms are kept in normal form:

* ``StarId`` on ``*``;
* ``ArrMor(args, res)`` for ``f⃗^σ ⊸ f``, with ``args : cod.args → dom.args``;
* ``SeqMor(perm, comps)`` for ``⟨f₁ … f_k⟩^σ`` with ``comps[i] : dom[perm[i]] → cod[i]``;
* ``Up(g) = (⟨⟩ ⊸ g) ∘ e`` and ``Down(g) = e⁻¹ ∘ (⟨⟩ ⊸ g)``, only with the
  extensional generators enabled.

Every composite of generators reduces to exactly one of these shapes, so
equality of morphisms is equality of normal forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from ..es import ParseError
from ..util import skey

# -- types ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Star:
    def __repr__(self) -> str:
        return "*"


@dataclass(frozen=True)
class Arrow:
    args: tuple
    res: "IType"

    def __repr__(self) -> str:
        return show_type(self)


IType = Star | Arrow
STAR = Star()


def show_type(a: IType) -> str:
    if isinstance(a, Star):
        return "*"
    return "(" + ",".join(show_type(b) for b in a.args) + ")-o" + show_type(a.res)


def show_seq(seq: Sequence[IType]) -> str:
    return "(" + ",".join(show_type(b) for b in seq) + ")"


def parse_type(text: str) -> IType:
    """``a ::= * | (a, …, a) -o a``; ``⊸`` may replace ``-o``."""
    s = text.replace("⊸", "-o").replace(" ", "")
    a, pos = _type_at(s, 0)
    if pos != len(s):
        raise ParseError(f"trailing input {s[pos:]!r} in type")
    return a


def parse_seq(text: str) -> tuple:
    s = text.replace("⊸", "-o").replace(" ", "")
    seq, pos = _seq_at(s, 0)
    if pos != len(s):
        raise ParseError(f"trailing input {s[pos:]!r} in type sequence")
    return seq


def _seq_at(s: str, pos: int) -> tuple[tuple, int]:
    if not s.startswith("(", pos):
        raise ParseError(f"expected '(' at offset {pos} in {s!r}")
    pos += 1
    items: list = []
    if s.startswith(")", pos):
        return (), pos + 1
    while True:
        a, pos = _type_at(s, pos)
        items.append(a)
        if s.startswith(",", pos):
            pos += 1
        elif s.startswith(")", pos):
            return tuple(items), pos + 1
        else:
            raise ParseError(f"expected ',' or ')' at offset {pos} in {s!r}")


def _type_at(s: str, pos: int) -> tuple[IType, int]:
    if s.startswith("*", pos):
        return STAR, pos + 1
    seq, pos = _seq_at(s, pos)
    if not s.startswith("-o", pos):
        raise ParseError(f"expected '-o' at offset {pos} in {s!r}")
    res, pos = _type_at(s, pos + 2)
    return Arrow(seq, res), pos


def arguments(a: IType) -> list[tuple]:
    """The curried argument sequences: ``a⃗₁ ⊸ … ⊸ a⃗_n ⊸ *`` gives ``[a⃗₁, …, a⃗_n]``."""
    out = []
    while isinstance(a, Arrow):
        out.append(a.args)
        a = a.res
    return out


def from_arguments(seqs: Sequence[tuple]) -> IType:
    a: IType = STAR
    for s in reversed(seqs):
        a = Arrow(tuple(s), a)
    return a


def depth(a: IType) -> int:
    """Nesting of ``⊸`` inside argument sequences (``*`` has depth 0)."""
    if isinstance(a, Star):
        return 0
    return max([1 + depth(b) for b in a.args] + [1, depth(a.res)])


def width(a: IType) -> int:
    """Largest argument sequence or number of curried arguments anywhere in ``a``."""
    if isinstance(a, Star):
        return 0
    seqs = arguments(a)
    inner = [width(b) for s in seqs for b in s]
    return max([len(seqs)] + [len(s) for s in seqs] + inner)


def tkey(a: IType) -> tuple:
    return skey(a)


@lru_cache(maxsize=None)
def canonical(a: IType, star: bool = True) -> IType:
    """The chosen representative of the isomorphism class of ``a``.

    Argument sequences are sorted; in D* a trailing ``⟨⟩ ⊸ *`` also
    collapses to ``*``.
    """
    if isinstance(a, Star):
        return a
    res = canonical(a.res, star)
    args = tuple(sorted((canonical(b, star) for b in a.args), key=tkey))
    if star and not args and isinstance(res, Star):
        return STAR
    return Arrow(args, res)


def canonical_seq(seq: Iterable[IType], star: bool = True) -> tuple:
    return tuple(sorted((canonical(b, star) for b in seq), key=tkey))


def isomorphic(a: IType, b: IType, star: bool = True) -> bool:
    return canonical(a, star) == canonical(b, star)


# -- morphisms ------------------------------------------------------------------------------


@dataclass(frozen=True)
class StarId:
    @property
    def dom(self) -> IType:
        return STAR

    @property
    def cod(self) -> IType:
        return STAR

    def __repr__(self) -> str:
        return "id*"


@dataclass(frozen=True)
class SeqMor:
    perm: tuple
    comps: tuple
    dom: tuple
    cod: tuple

    def __repr__(self) -> str:
        inner = ",".join(repr(c) for c in self.comps)
        return f"⟨{inner}⟩^{''.join(map(str, self.perm))}"


@dataclass(frozen=True)
class ArrMor:
    args: SeqMor
    res: "Mor"

    @property
    def dom(self) -> IType:
        return Arrow(self.args.cod, self.res.dom)

    @property
    def cod(self) -> IType:
        return Arrow(self.args.dom, self.res.cod)

    def __repr__(self) -> str:
        return f"({self.args!r}⊸{self.res!r})"


@dataclass(frozen=True)
class Up:
    """``(⟨⟩ ⊸ g) ∘ e : * → ⟨⟩ ⊸ cod(g)`` for ``g : * → b``."""

    inner: "Mor"

    @property
    def dom(self) -> IType:
        return STAR

    @property
    def cod(self) -> IType:
        return Arrow((), self.inner.cod)

    def __repr__(self) -> str:
        return "e" if isinstance(self.inner, StarId) else f"(⟨⟩⊸{self.inner!r})∘e"


@dataclass(frozen=True)
class Down:
    """``e⁻¹ ∘ (⟨⟩ ⊸ g) : ⟨⟩ ⊸ dom(g) → *`` for ``g : a → *``."""

    inner: "Mor"

    @property
    def dom(self) -> IType:
        return Arrow((), self.inner.dom)

    @property
    def cod(self) -> IType:
        return STAR

    def __repr__(self) -> str:
        return "e⁻¹" if isinstance(self.inner, StarId) else f"e⁻¹∘(⟨⟩⊸{self.inner!r})"


Mor = StarId | ArrMor | Up | Down
ID_STAR = StarId()
E = Up(ID_STAR)
E_INV = Down(ID_STAR)


class MorphismError(ValueError):
    """Mismatched domains, arities or permutations."""


def _check_star(m, star: bool) -> None:
    if not star and isinstance(m, (Up, Down)):
        raise MorphismError("e and e⁻¹ only exist in D*")


def identity(a: IType) -> Mor:
    if isinstance(a, Star):
        return ID_STAR
    return ArrMor(seq_identity(a.args), identity(a.res))


def seq_identity(seq: Sequence[IType]) -> SeqMor:
    seq = tuple(seq)
    return SeqMor(tuple(range(len(seq))), tuple(identity(b) for b in seq), seq, seq)


def compose(g: Mor, f: Mor, star: bool = True) -> Mor:
    """``g ∘ f``, reduced to normal form."""
    _check_star(f, star)
    _check_star(g, star)
    if f.cod != g.dom:
        raise MorphismError(f"cannot compose {g!r} after {f!r}: {show_type(f.cod)} ≠ {show_type(g.dom)}")
    if isinstance(f, StarId):
        return g
    if isinstance(g, StarId):
        return f
    if isinstance(f, ArrMor) and isinstance(g, ArrMor):
        return ArrMor(seq_compose(f.args, g.args, star), compose(g.res, f.res, star))
    if isinstance(f, Up) and isinstance(g, ArrMor):
        return Up(compose(g.res, f.inner, star))
    if isinstance(f, ArrMor) and isinstance(g, Down):
        return Down(compose(g.inner, f.res, star))
    if isinstance(f, Up) and isinstance(g, Down):
        return compose(g.inner, f.inner, star)
    if isinstance(f, Down) and isinstance(g, Up):
        return ArrMor(seq_identity(()), compose(g.inner, f.inner, star))
    raise MorphismError(f"no composite of {g!r} after {f!r}")


def seq_compose(g: SeqMor, f: SeqMor, star: bool = True) -> SeqMor:
    """``g ∘ f`` on sequences, matching composition in ``Sym``."""
    if f.cod != g.dom:
        raise MorphismError("sequence morphisms are not composable")
    n = len(g.perm)
    comps = tuple(compose(g.comps[i], f.comps[g.perm[i]], star) for i in range(n))
    perm = tuple(f.perm[g.perm[i]] for i in range(n))
    return SeqMor(perm, comps, f.dom, g.cod)


def inverse(m: Mor) -> Mor:
    if isinstance(m, StarId):
        return m
    if isinstance(m, ArrMor):
        return ArrMor(seq_inverse(m.args), inverse(m.res))
    if isinstance(m, Up):
        return Down(inverse(m.inner))
    return Up(inverse(m.inner))


def seq_inverse(s: SeqMor) -> SeqMor:
    n = len(s.perm)
    inv = [0] * n
    for i, j in enumerate(s.perm):
        inv[j] = i
    comps = tuple(inverse(s.comps[inv[j]]) for j in range(n))
    return SeqMor(tuple(inv), comps, s.cod, s.dom)


def normalize(word: Sequence[Mor], star: bool = True) -> Mor:
    """The normal form of ``word[-1] ∘ … ∘ word[0]``."""
    if not word:
        raise MorphismError("empty word")
    out = word[0]
    _check_star(out, star)
    for m in word[1:]:
        out = compose(m, out, star)
    return out


def check(m: Mor, star: bool = True) -> None:
    """Structural well-formedness: arities, permutations and matching endpoints."""
    _check_star(m, star)
    if isinstance(m, ArrMor):
        check_seq(m.args, star)
        check(m.res, star)
    elif isinstance(m, (Up, Down)):
        check(m.inner, star)
        end = m.inner.dom if isinstance(m, Up) else m.inner.cod
        if end != STAR:
            raise MorphismError(f"{m!r} must pass through *")


def check_seq(s: SeqMor, star: bool = True) -> None:
    n = len(s.cod)
    if len(s.dom) != n or len(s.comps) != n or sorted(s.perm) != list(range(n)):
        raise MorphismError(f"arity or permutation mismatch in {s!r}")
    for i, c in enumerate(s.comps):
        if c.dom != s.dom[s.perm[i]] or c.cod != s.cod[i]:
            raise MorphismError(f"component {i} of {s!r} has the wrong endpoints")
        check(c, star)


def hom(a: IType, b: IType, star: bool = True) -> tuple:
    """Every morphism ``a → b`` (finite: all of them are isomorphisms)."""
    return _hom(a, b, star)


@lru_cache(maxsize=None)
def _hom(a: IType, b: IType, star: bool) -> tuple:
    if isinstance(a, Star) and isinstance(b, Star):
        return (ID_STAR,)
    if isinstance(a, Star):
        if not star or b.args:
            return ()
        return tuple(Up(g) for g in _hom(a, b.res, star))
    if isinstance(b, Star):
        if not star or a.args:
            return ()
        return tuple(Down(g) for g in _hom(a.res, b, star))
    ress = _hom(a.res, b.res, star)
    if not ress:
        return ()
    return tuple(ArrMor(s, r) for s in seq_hom(b.args, a.args, star) for r in ress)


def seq_hom(dom: Sequence[IType], cod: Sequence[IType], star: bool = True) -> tuple:
    return _seq_hom(tuple(dom), tuple(cod), star)


@lru_cache(maxsize=None)
def _seq_hom(dom: tuple, cod: tuple, star: bool) -> tuple:
    n = len(dom)
    if len(cod) != n:
        return ()
    out = []
    for perm in itertools.permutations(range(n)):
        options = [_hom(dom[perm[i]], cod[i], star) for i in range(n)]
        if any(not o for o in options):
            continue
        for comps in itertools.product(*options):
            out.append(SeqMor(perm, comps, dom, cod))
    return tuple(out)


def automorphisms(a: IType, star: bool = True) -> tuple:
    return hom(a, a, star)


def mor_iter(objs: Iterable[IType], star: bool = True) -> Iterator[Mor]:
    objs = list(objs)
    for a in objs:
        for b in objs:
            yield from hom(a, b, star)
