"""Derivations against game witnesses, point by point.

At a point ``(δ, a)`` the classes of derivations of a term and the
positive witnesses of its collapsed strategy at ``(R(δ), R(a))`` are two
sets acted on by the point automorphisms.  :func:`correspondence_check`
compares their sizes, checks the count is stable when the truncation
grows, and looks for an equivariant bijection between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..dist import equivariant_bijection
from ..symmetry import SymBijection
from ..util import Report
from . import itypes as T
from .derivations import ITD, ctx_inverse, itd, parse_point, show_point
from .interp import GameSide, game_witnesses
from .terms import Term, normal_form, parse_term, show
from .universal import required_truncation, seq_mor_paths, to_symmetry, u_event


def _require(report: Report, ok: bool, msg: str) -> None:
    if not ok:
        report.add(msg)


def ctx_symmetry(theta: tuple, level: int) -> SymBijection:
    """``R(θ)`` on the context game, for ``θ`` a tuple of sequence morphisms."""
    nvars = len(theta)
    pairs = set()
    for v, s in enumerate(theta):
        for (j, p), (k, q) in seq_mor_paths(s).items():
            a, b = (j, u_event(p, level)), (k, u_event(q, level))
            pairs.add((a, b) if nvars == 1 else ((v, a), (v, b)))
    return SymBijection(frozenset(pairs))


def game_action(side: GameSide, level: int):
    """``(θ, g) · w = R(g) · w · R(θ⁻¹)``, mirroring :meth:`ITD.act`."""
    d = side.collapsed

    def act(auto: tuple, w):
        theta, g = auto
        return d.left(to_symmetry(g, level), d.right(w, ctx_symmetry(ctx_inverse(theta), level)))

    return act


@dataclass
class Correspondence:
    derivations: ITD
    game: GameSide
    bigger: GameSide | None
    level: int
    width: int
    bijection: dict | None
    report: Report

    @property
    def ok(self) -> bool:
        return self.report.ok


def correspondence_check(term: Term | str, names: Sequence[str], ctx, typ: T.IType,
                         level: int | None = None, width: int | None = None,
                         stability: bool = True, equivariant: bool = True) -> Correspondence:
    """Compare derivation classes with game witnesses at the point ``(ctx, typ)``.

    The truncation defaults to the smallest one the point fits in.
    """
    if isinstance(term, str):
        term = parse_term(term, free=names)
    ctx = tuple(tuple(s) for s in ctx)
    need = required_truncation(ctx, typ)
    level = need[0] if level is None else level
    width = need[1] if width is None else width
    label = f"{show(term)} at {show_point(ctx, typ)}"
    report = Report(f"correspondence for {label}")
    der = itd(term, names, ctx, typ)
    side = game_witnesses(term, names, ctx, typ, level, width)
    _require(report, der.count == side.count,
             f"{der.count} derivation classes but {side.count} witnesses at U{level}, width {width}")
    bigger = None
    if stability:
        bigger = game_witnesses(term, names, ctx, typ, level + 1, width + 1)
        _require(report, bigger.count == side.count,
                 f"witness count moves from {side.count} to {bigger.count} at U{level + 1}, width {width + 1}")
    bijection = None
    if equivariant and der.count == side.count:
        group = der.point_automorphisms()
        witnesses = list(side.witnesses)
        bijection = equivariant_bijection(group, lambda a, c: der.act(a[0], a[1], c), list(range(der.count)),
                                          game_action(side, level), witnesses)
        _require(report, bijection is not None, "no bijection commutes with the point automorphisms")
    return Correspondence(der, side, bigger, level, width, bijection, report)


def correspond(term: Term | str, names: Sequence[str], point: str, **kwargs) -> Correspondence:
    """:func:`correspondence_check` with the point written as ``seq;…;type``."""
    ctx, typ = parse_point(point)
    return correspondence_check(term, names, ctx, typ, **kwargs)


def beta_invariance(term: Term | str, names: Sequence[str], ctx, typ: T.IType,
                    level: int | None = None, width: int | None = None, fuel: int = 1000,
                    widen: int = 0) -> Report:
    """A term and its normal form have as many witnesses and derivation classes.

    ``widen`` extends the argument types tried for the redex; see :func:`~.derivations.widen_atoms`.
    """
    if isinstance(term, str):
        term = parse_term(term, free=names)
    report = Report(f"β-invariance of {show(term)}")
    nf = normal_form(term, fuel)
    if nf is None:
        report.add(f"no normal form within {fuel} steps")
        return report
    ctx = tuple(tuple(s) for s in ctx)
    need = required_truncation(ctx, typ)
    level = need[0] if level is None else level
    width = need[1] if width is None else width
    a = game_witnesses(term, names, ctx, typ, level, width).count
    b = game_witnesses(nf, names, ctx, typ, level, width).count
    _require(report, a == b, f"{a} witnesses for the term, {b} for its normal form")
    c, d = itd(term, names, ctx, typ, widen=widen).count, itd(nf, names, ctx, typ).count
    _require(report, c == d, f"{c} derivation classes for the term, {d} for its normal form")
    return report

