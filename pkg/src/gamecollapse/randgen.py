"""Seeded random arenas, boards and strategies for property suites.

Random strategies are sub-structures of their game: every displayed move
appears once, Opponent moves keep their game causes and each Player move
may wait for one extra Opponent move.  Waiting only on moves above the
Player move's own justifier keeps the strategy visible.
"""

from __future__ import annotations

import random
from typing import Iterator

from .es import EventStructure
from .games import Game, bang, game_from_es, hom
from .strategies import (
    Strategy,
    compose,
    dereliction,
    promotion,
    validate_strategy,
    validate_visible,
    validate_winning,
)


def arena_payoff(es: EventStructure):
    """``1`` on ∅, ``-1`` while some Opponent move awaits a Player answer, else ``0``."""

    def payoff(x: frozenset) -> int:
        if not x:
            return 1
        for e in x:
            if es.pol(e) == "-":
                answers = es.succs(e)
                if answers and not (answers & x):
                    return -1
        return 0

    return payoff


def random_arena(rng: random.Random, max_events: int = 4, strict: bool = True, name: str = "A") -> Game:
    """A forest with negative roots and alternating polarity, as a board.

    Sibling moves are in conflict with probability one half; roots always
    are when ``strict``.
    """
    n = rng.randint(1, max_events)
    parent: dict = {0: None}
    for e in range(1, n):
        parent[e] = rng.choice([None] + list(range(e)))
    depth = {}
    for e in range(n):
        depth[e] = 0 if parent[e] is None else depth[parent[e]] + 1
    pol = {e: "-" if depth[e] % 2 == 0 else "+" for e in range(n)}
    causes = [(parent[e], e) for e in range(n) if parent[e] is not None]
    conflicts = []
    roots = [e for e in range(n) if parent[e] is None]
    for i, a in enumerate(roots):
        for b in roots[i + 1:]:
            if strict or rng.random() < 0.5:
                conflicts.append((a, b))
    for p in range(n):
        kids = [e for e in range(n) if parent[e] == p]
        for i, a in enumerate(kids):
            for b in kids[i + 1:]:
                if rng.random() < 0.5:
                    conflicts.append((a, b))
    es = EventStructure.build(range(n), causes, conflicts, pol)
    return game_from_es(es, arena_payoff(es), name=name)


def random_strategy(
    rng: random.Random,
    game: Game,
    visible: bool = True,
    eager: float = 0.8,
    wait: float = 0.3,
    name: str = "σ",
) -> Strategy:
    """A strategy embedded in ``game`` (see the module docstring)."""
    ges = game.es
    chosen: set = set()
    declined: set = set()
    causes: list = []
    while True:
        grew = True
        while grew:
            grew = False
            for e in ges.events:
                if e not in chosen and ges.pol(e) == "-" and ges.preds(e) <= chosen:
                    chosen.add(e)
                    causes.extend((p, e) for p in ges.preds(e))
                    grew = True
        cands = [e for e in ges.events
                 if e not in chosen and e not in declined and ges.pol(e) == "+" and ges.preds(e) <= chosen]
        if not cands:
            break
        for p in cands:
            if rng.random() > eager:
                declined.add(p)
                continue
            preds = ges.preds(p)
            options = [
                n for n in ges.events
                if n in chosen and ges.pol(n) == "-" and n not in preds and not ges.in_conflict(n, p)
                and (not visible or not preds or all(ges.leq(m, n) for m in preds))
            ]
            extra = None
            if options and (not preds or rng.random() < wait):
                extra = rng.choice(sorted(options, key=repr))
            if not preds and extra is None:
                declined.add(p)
                continue
            chosen.add(p)
            causes.extend((m, p) for m in preds)
            if extra is not None:
                causes.append((extra, p))
    evs = sorted(chosen, key=repr)
    conflicts = [tuple(c) for c in ges.conflict if c <= chosen and len(c) == 2]
    es = EventStructure.build(evs, causes, conflicts, {e: ges.pol(e) for e in evs})
    return Strategy(es, game, {e: e for e in evs}, name=name)


def random_composable(
    rng: random.Random,
    visible: bool = True,
    winning: bool = True,
    max_events: int = 8,
    max_arena: int = 3,
    tries: int = 200,
    bang_prob: float = 0.0,
) -> tuple[Strategy, Strategy]:
    """Strategies ``σ : A ⊢ B`` and ``τ : B ⊢ C`` passing the requested validators.

    With probability ``bang_prob`` the pair is instead ``(σ₀∘der)!`` and
    ``τ₀∘der`` on two-copy bangs, built from smaller random strategies, so
    that the games carry non-trivial symmetries.
    """
    for _ in range(tries):
        if rng.random() < bang_prob:
            pair = _symmetric_pair(rng, visible, max_arena)
            if pair is None:
                continue
            sigma, tau = pair
            if len(sigma.es) > max_events or len(tau.es) > max_events:
                continue
            if all(acceptable(s, visible, winning) for s in (sigma, tau)):
                return sigma, tau
            continue
        a = random_arena(rng, max_arena, strict=rng.random() < 0.5, name="A")
        b = random_arena(rng, max_arena, strict=True, name="B")
        c = random_arena(rng, max_arena, strict=True, name="C")
        sigma = random_strategy(rng, hom(a, b), visible=visible, name="σ")
        tau = random_strategy(rng, hom(b, c), visible=visible, name="τ")
        if len(sigma.es) > max_events or len(tau.es) > max_events:
            continue
        if all(acceptable(s, visible, winning) for s in (sigma, tau)):
            return sigma, tau
    raise RuntimeError("no acceptable random pair found")


def random_chain(
    rng: random.Random,
    length: int = 3,
    visible: bool = True,
    winning: bool = True,
    max_events: int = 8,
    max_arena: int = 3,
    tries: int = 500,
) -> list[Strategy]:
    """``length`` composable strategies ``A₀ ⊢ A₁ ⊢ … ⊢ A_length``."""
    for _ in range(tries):
        arenas = [random_arena(rng, max_arena, strict=True, name=f"A{i}") for i in range(length + 1)]
        chain = []
        for i in range(length):
            s = random_strategy(rng, hom(arenas[i], arenas[i + 1]), visible=visible, name=f"σ{i}")
            if len(s.es) > max_events or not acceptable(s, visible, winning):
                break
            chain.append(s)
        else:
            return chain
    raise RuntimeError("no acceptable random chain found")


def _symmetric_pair(rng: random.Random, visible: bool, max_arena: int) -> tuple[Strategy, Strategy] | None:
    a = random_arena(rng, min(max_arena, 2), strict=True, name="A")
    b = random_arena(rng, min(max_arena, 2), strict=True, name="B")
    c = random_arena(rng, max_arena, strict=True, name="C")
    s0 = random_strategy(rng, hom(a, b), visible=visible, name="σ")
    t0 = random_strategy(rng, hom(b, c), visible=visible, name="τ")
    if not (validate_strategy(s0).ok and validate_strategy(t0).ok):
        return None
    sigma = promotion(compose(dereliction(a, 1), s0, name="σ"), 2)
    tau = compose(dereliction(b, 2), t0, name="τ")
    return sigma, tau


def acceptable(sigma: Strategy, visible: bool, winning: bool) -> bool:
    if not validate_strategy(sigma).ok:
        return False
    if visible and not validate_visible(sigma).ok:
        return False
    return not winning or validate_winning(sigma).ok


def random_strategies(rng: random.Random, count: int, **kw) -> Iterator[Strategy]:
    """``count`` valid strategies on random ``A ⊢ B`` games, ``A`` possibly under a bang."""
    made = 0
    while made < count:
        a = random_arena(rng, kw.get("max_arena", 3), strict=True, name="A")
        b = random_arena(rng, kw.get("max_arena", 3), strict=True, name="B")
        if kw.get("bang") and rng.random() < 0.5:
            a = bang(a, 2)
        sigma = random_strategy(rng, hom(a, b), visible=kw.get("visible", True))
        if len(sigma.es) <= kw.get("max_events", 8) and acceptable(sigma, kw.get("visible", True), kw.get("winning", False)):
            made += 1
            yield sigma
