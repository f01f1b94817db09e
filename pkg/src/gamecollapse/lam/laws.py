"""Seeded law suites for derivation actions and congruence classes.

Random derivations start from the enumerated derivations of a fixed pool
of judgements and are pushed along random isomorphisms, so they are in
general not in the canonical shape the enumeration produces.
"""

from __future__ import annotations

import random
from functools import lru_cache

from ..util import Report
from . import itypes as T
from .derivations import (
    DerivationError,
    Moves,
    check_derivation,
    classes_orbits,
    classes_union_find,
    ctx_compose,
    ctx_identity,
    enumerate_derivations,
    itd,
    left,
    parse_point,
    right,
    show_point,
)

POOL: tuple[tuple[str, tuple, str], ...] = (
    ("x x", ("x",), "((*,*)-o*,*,*);*"),
    ("x y", ("x", "y"), "((*,*)-o*);(*,*);*"),
    ("x (x y)", ("x", "y"), "((*)-o*,(*)-o*);(*);*"),
    ("\\f x. f (f x)", (), "((*)-o*,(*)-o*)-o(*)-o*"),
    ("x x x", ("x",), "((*,*)-o*,*,*);*"),
    ("y", ("y",), "((*,*)-o*);(*,*)-o*"),
    ("\\z. y z", ("y",), "((*,*)-o*);(*,*)-o*"),
    ("\\a b. x b a", ("x",), "((*)-o(*)-o*);(*)-o(*)-o*"),
    ("x y y", ("x", "y"), "((*,*)-o()-o*);(*,*);*"),
    ("\\x. x", (), "((*,*)-o*)-o(*,*)-o*"),
    ("x (\\z. z)", ("x",), "(((*)-o*)-o*);*"),
)


@lru_cache(maxsize=None)
def pool_derivations() -> tuple:
    """``(term, names, ctx, typ, derivations)`` for every judgement of :data:`POOL`."""
    out = []
    for term, names, point in POOL:
        ctx, typ = parse_point(point)
        out.append((term, names, ctx, typ, enumerate_derivations(term, names, ctx, typ)))
    return tuple(out)


def random_variant(rng: random.Random, a: T.IType) -> T.IType:
    """A random type isomorphic to ``a`` in D*: arguments shuffled, ``*`` sometimes ``⟨⟩ ⊸ *``."""
    if isinstance(a, T.Star):
        return T.Arrow((), T.STAR) if rng.random() < 0.3 else a
    args = [random_variant(rng, b) for b in a.args]
    rng.shuffle(args)
    res = random_variant(rng, a.res)
    if not args and isinstance(res, T.Star):
        return res
    return T.Arrow(tuple(args), res)


def random_iso(rng: random.Random, a: T.IType, into: bool = True) -> T.Mor:
    """A random isomorphism from a variant of ``a`` into ``a`` (or out of ``a``)."""
    b = random_variant(rng, a)
    homs = T.hom(b, a) if into else T.hom(a, b)
    return rng.choice(homs)


def random_ctx_iso(rng: random.Random, ctx: tuple) -> tuple:
    """``θ : δ' → ctx`` with ``δ'`` a random variant, one sequence morphism per variable."""
    out = []
    for seq in ctx:
        variant = [random_variant(rng, b) for b in seq]
        rng.shuffle(variant)
        out.append(rng.choice(T.seq_hom(tuple(variant), seq)))
    return tuple(out)


def random_derivation(rng: random.Random):
    """A pool derivation moved along random isomorphisms on both sides."""
    _, _, _, _, derivs = rng.choice(pool_derivations())
    d = rng.choice(derivs)
    d = right(d, random_ctx_iso(rng, d.ctx))
    return left(random_iso(rng, d.typ, into=False), d)


def action_laws(d, rng: random.Random, report: Report) -> None:
    """Unit, composition and interchange laws of the two actions at ``d``."""
    label = f"derivation over {show_point(d.ctx, d.typ)}"
    ident = ctx_identity(d.ctx)
    if right(d, ident) != d:
        report.add(f"{label}: π{{id}} ≠ π")
    if left(T.identity(d.typ), d) != d:
        report.add(f"{label}: [id]π ≠ π")
    theta = random_ctx_iso(rng, d.ctx)
    theta2 = random_ctx_iso(rng, tuple(s.dom for s in theta))
    once = right(right(d, theta), theta2)
    if once != right(d, ctx_compose(theta, theta2)):
        report.add(f"{label}: (π{{θ}}){{θ'}} ≠ π{{θ∘θ'}}")
    g = random_iso(rng, d.typ, into=False)
    g2 = random_iso(rng, g.cod, into=False)
    if left(g2, left(g, d)) != left(T.compose(g2, g), d):
        report.add(f"{label}: [g']([g]π) ≠ [g'∘g]π")
    if left(g, right(d, theta)) != right(left(g, d), theta):
        report.add(f"{label}: [g](π{{θ}}) ≠ ([g]π){{θ}}")
    try:
        check_derivation(left(g, right(d, theta)))
    except DerivationError as err:
        report.add(f"{label}: acted derivation is ill-formed: {err}")


def action_suite(count: int = 500, seed: int = 0) -> Report:
    """:func:`action_laws` on ``count`` random derivations."""
    rng = random.Random(seed)
    report = Report(f"derivation action laws on {count} random derivations (seed {seed})")
    for _ in range(count):
        action_laws(random_derivation(rng), rng, report)
    return report


def class_action_suite() -> Report:
    """Point automorphisms act on classes: well defined, unital and compositional."""
    report = Report("point automorphisms acting on derivation classes")
    for term, names, ctx, typ, _ in pool_derivations():
        dist = itd(term, names, ctx, typ)
        autos = dist.point_automorphisms()
        for theta, g in autos:
            for cls, members in enumerate(dist.classes):
                images = {dist.class_of(left(g, right(d, tuple(T.seq_inverse(s) for s in theta)))) for d in members}
                if len(images) != 1:
                    report.add(f"{term}: action not constant on class {cls}")
        ident = (ctx_identity(ctx), T.identity(typ))
        for cls in range(dist.count):
            if dist.act(*ident, cls) != cls:
                report.add(f"{term}: identity moves class {cls}")
            for t1, g1 in autos:
                for t2, g2 in autos:
                    both = dist.act(ctx_compose(t1, t2), T.compose(g1, g2), cls)
                    if both != dist.act(t1, g1, dist.act(t2, g2, cls)):
                        report.add(f"{term}: action is not compositional on class {cls}")
    return report


def order_suite(seed: int = 0) -> Report:
    """Union-find, orbit search and shuffled input all give the same partition."""
    rng = random.Random(seed)
    report = Report("congruence saturation order independence")
    for term, _, ctx, typ, derivs in pool_derivations():
        moves = Moves()
        base = classes_union_find(derivs, moves)
        shuffled = list(derivs)
        rng.shuffle(shuffled)
        if classes_orbits(derivs, moves) != base:
            report.add(f"{term} at {show_point(ctx, typ)}: orbit search disagrees with union-find")
        if classes_union_find(shuffled, moves) != base:
            report.add(f"{term} at {show_point(ctx, typ)}: shuffled input changes the partition")
    return report
