"""Strategies: event structures displayed into games.

A strategy on ``hom(A, B)`` is a strategy from ``A`` to ``B``; its display
tags moves of ``A`` with 0 and moves of ``B`` with 1.  Strategies on any
other game ``G`` are read as strategies from the unit ``I`` to ``G``
(:func:`as_hom` makes that explicit).

Unless a symmetry family is supplied, a strategy carries the family
induced from its game: bijections of configurations that preserve the
causal order and display to a symmetry of the game.
"""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .es import (
    EventStructure,
    ParseError,
    bfs_order,
    dump_es,
    gccs,
    numbering,
    parse_es_lines,
    primes_from_family,
    tokenize,
)
from .games import (
    Game,
    bang,
    empty_board,
    hom,
    load_game,
    lolli,
    split,
    tensor,
    with_product,
)
from .symmetry import IsoFamily, SymBijection
from .util import Report, TruncationError, ValidationError, skey, ssorted

Config = frozenset


def same_game(a: Game, b: Game) -> bool:
    """Structural equality of the underlying event structures."""
    if a is b:
        return True
    return (
        a.es.events == b.es.events
        and a.es.cover == b.es.cover
        and a.es.conflict == b.es.conflict
        and dict(a.es.polarity) == dict(b.es.polarity)
    )


def order_preserving(es: EventStructure, phi: SymBijection) -> bool:
    """Whether ``phi`` (between configurations of ``es``) is an order-isomorphism."""
    f = phi.fwd
    for a, b in itertools.permutations(phi.dom, 2):
        if es.leq(a, b) != es.leq(f[a], f[b]):
            return False
    return True


@dataclass(eq=False)
class Strategy:
    """An event structure with a display map into ``game``."""

    es: EventStructure
    game: Game
    display: Mapping
    name: str = "σ"
    between: Callable | None = None
    meta: dict = field(default_factory=dict)

    def disp(self, x: Iterable) -> frozenset:
        return frozenset(self.display[e] for e in x)

    @property
    def is_hom(self) -> bool:
        return self.game.kind == "hom"

    @property
    def left(self) -> Game:
        return self.game.parts[0] if self.is_hom else empty_board()

    @property
    def right(self) -> Game:
        return self.game.parts[1] if self.is_hom else self.game

    def sides(self, x: Iterable) -> tuple[frozenset, frozenset]:
        """``(x_A, x_B)`` for the display of ``x``."""
        d = self.disp(x)
        if self.is_hom:
            return split(d, 0), split(d, 1)
        return frozenset(), d

    @cached_property
    def configurations(self) -> list[Config]:
        return self.es.configurations()

    @cached_property
    def plus_covered(self) -> list[Config]:
        es = self.es
        return [x for x in self.configurations if all(es.pol(e) == "+" for e in es.maximal(x))]

    @cached_property
    def maximal_configurations(self) -> list[Config]:
        confs = self.configurations
        return [x for x in confs if not any(e not in x and self.es.is_enabled(x, e) for e in self.es.events)]

    @cached_property
    def by_display(self) -> dict:
        out: dict = {}
        for x in self.configurations:
            out.setdefault(self.disp(x), []).append(x)
        return out

    @cached_property
    def tilde(self) -> IsoFamily:
        return IsoFamily(self.es, between=self.between or self._induced_between, name=f"{self.name}~")

    def _induced_between(self, x: Config, y: Config) -> Iterator[SymBijection]:
        back = {self.display[e]: e for e in y}
        for th in self.game.tilde.between(self.disp(x), self.disp(y)):
            phi = SymBijection(frozenset((e, back[th(self.display[e])]) for e in x))
            if order_preserving(self.es, phi):
                yield phi

    def boundary(self, phi: SymBijection) -> SymBijection:
        return SymBijection(frozenset((self.display[a], self.display[b]) for a, b in phi.pairs))

    def __repr__(self) -> str:
        return f"Strategy({self.name} on {self.game.name}, {len(self.es)} events)"


def as_hom(sigma: Strategy) -> Strategy:
    """Read a strategy on ``G`` as one on ``hom(I, G)``."""
    if sigma.is_hom:
        return sigma
    g = hom(empty_board(), sigma.game)
    return Strategy(sigma.es, g, {e: (1, d) for e, d in sigma.display.items()}, sigma.name, sigma.tilde.between)


def tagged_between(families: Mapping[int, IsoFamily]) -> Callable:
    """Family on events ``(tag, e)``: componentwise members of ``families[tag]``."""

    def between(x: Config, y: Config) -> Iterator[SymBijection]:
        opts = []
        for tag, fam in families.items():
            xs, ys = split(x, tag), split(y, tag)
            found = fam.between(xs, ys)
            if not found:
                return
            opts.append([frozenset(((tag, a), (tag, b)) for a, b in th.pairs) for th in found])
        if len(x) != sum(len(split(x, t)) for t in families):
            return
        for combo in itertools.product(*opts):
            yield SymBijection(frozenset().union(*combo))

    return between


def _bang_copies_between(fam: IsoFamily) -> Callable:
    """Family on events ``(i, e)`` reindexing whole copies of a strategy."""

    def between(x: Config, y: Config) -> Iterator[SymBijection]:
        cx, cy = _by_copy(x), _by_copy(y)
        if len(cx) != len(cy):
            return
        src = sorted(cx)
        for perm in itertools.permutations(sorted(cy)):
            options = []
            for i, j in zip(src, perm):
                found = fam.between(cx[i], cy[j])
                if not found:
                    break
                options.append([frozenset(((i, a), (j, b)) for a, b in th.pairs) for th in found])
            else:
                for combo in itertools.product(*options):
                    yield SymBijection(frozenset().union(*combo))

    return between


def _by_copy(x: Iterable) -> dict:
    out: dict = {}
    for i, e in x:
        out.setdefault(i, set()).add(e)
    return {i: frozenset(v) for i, v in out.items()}


# -- validation ------------------------------------------------------------------


def validate_strategy(sigma: Strategy, thin: bool = True) -> Report:
    """Display map, receptivity, courtesy and (if ``thin``) the symmetry conditions.

    Receptivity is checked against the (possibly truncated) game as given.
    """
    rep = Report(f"strategy {sigma.name}")
    es, game = sigma.es, sigma.game
    for e in es.events:
        if e not in sigma.display:
            rep.add(f"event {e!r} has no display")
        elif sigma.display[e] not in game.es:
            rep.add(f"event {e!r} displays to {sigma.display[e]!r}, not a move of the game")
        elif es.pol(e) != game.es.pol(sigma.display[e]):
            rep.add(f"event {e!r} has polarity {es.pol(e)} but displays to a {game.es.pol(sigma.display[e])} move")
    if not rep.ok:
        return rep
    for x in sigma.configurations:
        d = sigma.disp(x)
        if len(d) != len(x):
            rep.add(f"display not injective on {ssorted(x)}")
            continue
        if not game.es.is_configuration(d):
            rep.add(f"display of {ssorted(x)} is not a configuration")
            continue
        for a in game.es.enabled(d):
            if game.es.pol(a) != "-":
                continue
            hits = [s for s in es.enabled(x) if sigma.display[s] == a]
            if len(hits) != 1:
                rep.add(f"receptivity: {len(hits)} responses to Opponent move {a!r} at {ssorted(x)}")
    for s, t in es.cover:
        if es.pol(s) == "+" or es.pol(t) == "-":
            if (sigma.display[s], sigma.display[t]) not in game.es.cover:
                rep.add(f"courtesy: {s!r} ↣ {t!r} is not a causal link of the game")
    if thin and rep.ok:
        rep.extend(_validate_symmetry(sigma))
    return rep


def _validate_symmetry(sigma: Strategy) -> Report:
    rep = Report("symmetry")
    es, game = sigma.es, sigma.game
    for x in sigma.configurations:
        ex = es.enabled(x)
        for phi in sigma.tilde.from_(x):
            if not sigma.boundary(phi) in game.tilde:
                rep.add(f"{phi!r} does not display to a symmetry of the game")
                continue
            y = phi.cod
            ey = es.enabled(y)
            for s in ex:
                if not any(big.extends(phi) for big in sigma.tilde.from_(x | {s})):
                    rep.add(f"extension: {phi!r} does not extend along {s!r}")
            # Opponent extensions of the display must lift
            for s in ex:
                if es.pol(s) != "-":
                    continue
                for t in ey:
                    if es.pol(t) != "-":
                        continue
                    psi = SymBijection(sigma.boundary(phi).pairs | {(sigma.display[s], sigma.display[t])})
                    big = SymBijection(phi.pairs | {(s, t)})
                    if psi in game.tilde and big not in sigma.tilde:
                        rep.add(f"symmetry-receptivity: {phi!r} does not extend along {s!r} ↦ {t!r}")
            # Player extensions of identities must be trivial
            if phi.is_identity():
                for s in ex:
                    if es.pol(s) != "+":
                        continue
                    for t in ey:
                        if t != s and SymBijection(phi.pairs | {(s, t)}) in sigma.tilde:
                            rep.add(f"thinness: identity on {ssorted(x)} extends by {s!r} ↦ {t!r}")
    return rep


def validate_winning(sigma: Strategy) -> Report:
    rep = Report(f"winning {sigma.name}")
    for x in sigma.plus_covered:
        v = sigma.game.kappa(sigma.disp(x))
        if v < 0:
            rep.add(f"+-covered {ssorted(x)} displays to payoff {v}")
    return rep


def validate_visible(sigma: Strategy) -> Report:
    rep = Report(f"visible {sigma.name}")
    for chain in gccs(sigma.es):
        if not sigma.game.es.is_configuration(sigma.disp(chain)):
            rep.add(f"gcc {list(chain)} displays to a non-configuration")
    for e in sigma.es.events:
        roots = [m for m in sigma.es.down(e) if not sigma.es.preds(m)]
        if len(roots) != 1 or sigma.es.pol(roots[0]) != "-":
            rep.add(f"event {e!r} lacks a unique negative minimal ancestor")
    return rep


# -- copycat and dereliction ------------------------------------------------------


def _copycat_es(a: Game) -> EventStructure:
    g = hom(a, a)
    links = []
    for e in a.es.events:
        if a.es.pol(e) == "-":
            links.append(((1, e), (0, e)))
        else:
            links.append(((0, e), (1, e)))
    return EventStructure.build(
        g.es.events, list(g.es.cover) + links, [tuple(p) for p in g.es.conflict], g.es.polarity
    )


def copycat(a: Game) -> Strategy:
    es = _copycat_es(a)
    return Strategy(es, hom(a, a), {e: e for e in es.events}, name=f"cc({a.name})")


def cc_config(x: Iterable) -> frozenset:
    """The configuration of copycat displaying to ``x ⊢ x``."""
    xs = frozenset(x)
    return frozenset((0, e) for e in xs) | frozenset((1, e) for e in xs)


def dereliction(a: Game, width: int) -> Strategy:
    """Copycat with its source read as copy 0 of ``bang(a, width)``."""
    if not a.is_strict():
        raise ValidationError(f"dereliction: {a.name} is not strict")
    es = _copycat_es(a)
    display = {(0, e): (0, (0, e)) for e in a.es.events}
    display.update({(1, e): (1, e) for e in a.es.events})
    return Strategy(es, hom(bang(a, width), a), display, name=f"der({a.name})", between=copycat(a).tilde.between)


# -- composition ----------------------------------------------------------------------


@dataclass(frozen=True)
class MatchedPair:
    """Configurations of σ and τ agreeing on the shared game up to ``theta``."""

    left: Config
    right: Config
    theta: SymBijection | None = None


def _check_composable(sigma: Strategy, tau: Strategy) -> None:
    if not (sigma.is_hom and tau.is_hom):
        raise ValidationError("composition needs strategies on hom games")
    if not same_game(sigma.right, tau.left):
        raise ValidationError(f"{sigma.name} and {tau.name} do not share a middle game")


def matching_pairs(sigma: Strategy, tau: Strategy) -> Iterator[tuple[Config, Config]]:
    by_mid: dict = {}
    for xt in tau.configurations:
        by_mid.setdefault(split(tau.disp(xt), 0), []).append(xt)
    for xs in sigma.configurations:
        for xt in by_mid.get(split(sigma.disp(xs), 1), ()):
            yield xs, xt


def interaction(
    sigma: Strategy, tau: Strategy, xs: Config, xt: Config, theta: SymBijection | None = None
) -> tuple[frozenset, nx.DiGraph]:
    """The synchronized events of a matching pair and their causal graph.

    With ``theta`` the middle parts need only match up to that symmetry.
    """
    partner = {tau.display[t][1]: t for t in xt if tau.display[t][0] == 0}
    node_s: dict = {}
    node_t: dict = {}
    for s in xs:
        tag, m = sigma.display[s]
        if tag == 0:
            node_s[s] = ("A", s)
        else:
            t = partner.get(m if theta is None else theta.fwd.get(m))
            if t is None:
                raise ValidationError("configurations do not match on the shared game")
            node_s[s] = node_t[t] = ("B", s, t)
    for t in xt:
        if tau.display[t][0] == 1:
            node_t[t] = ("C", t)
    if len(node_t) != len(xt):
        raise ValidationError("configurations do not match on the shared game")
    g = nx.DiGraph()
    g.add_nodes_from(node_s.values())
    g.add_nodes_from(node_t.values())
    g.add_edges_from((node_s[a], node_s[b]) for a, b in sigma.es.cover if a in xs and b in xs)
    g.add_edges_from((node_t[a], node_t[b]) for a, b in tau.es.cover if a in xt and b in xt)
    return frozenset(g.nodes), g


def secured(sigma: Strategy, tau: Strategy, pair: MatchedPair | tuple) -> bool:
    """Whether the two causal orders agree on a matching pair (no deadlock)."""
    if isinstance(pair, MatchedPair):
        _, g = interaction(sigma, tau, pair.left, pair.right, pair.theta)
    else:
        _, g = interaction(sigma, tau, *pair)
    return nx.is_directed_acyclic_graph(g)


def _interaction_pol(sigma: Strategy, tau: Strategy, node) -> str:
    if node[0] == "A":
        return sigma.es.pol(node[1])
    if node[0] == "C":
        return tau.es.pol(node[1])
    return "."


def compose(sigma: Strategy, tau: Strategy, name: str | None = None) -> Strategy:
    """``τ ⊙ σ``: secured interactions with the synchronized events hidden.

    The interaction is rebuilt from its family of configurations and the
    composite keeps its visible events.  ``meta["pairs"]`` maps each
    +-covered configuration of the composite to the pair it comes from.
    """
    _check_composable(sigma, tau)
    family = []
    pair_of: dict = {}
    for xs, xt in matching_pairs(sigma, tau):
        nodes, g = interaction(sigma, tau, xs, xt)
        if nx.is_directed_acyclic_graph(g):
            family.append(nodes)
            pair_of[nodes] = (xs, xt)
    rec = primes_from_family(family, check=False)
    visible = [p for p in rec.es.events if rec.top[p][0] != "B"]
    vid = {p: i for i, p in enumerate(visible)}
    causes = [(vid[p], vid[q]) for p in visible for q in visible if p != q and rec.es.leq(p, q)]
    conflicts = [(vid[p], vid[q]) for p, q in itertools.combinations(visible, 2) if rec.es.in_conflict(p, q)]
    pol = {vid[p]: _interaction_pol(sigma, tau, rec.top[p]) for p in visible}
    es = EventStructure.build(range(len(visible)), causes, conflicts, pol)
    display = {}
    for p in visible:
        node = rec.top[p]
        display[vid[p]] = (sigma if node[0] == "A" else tau).display[node[1]]
    top = {vid[p]: rec.top[p] for p in visible}
    prime = {vid[p]: rec.prime[p] for p in visible}
    game = hom(sigma.left, tau.right)

    def lift(z: Config) -> frozenset:
        acc: set = set()
        for p in z:
            acc |= prime[p]
        return frozenset(acc)

    def project(big: frozenset) -> frozenset:
        return frozenset(p for p in prime if prime[p] <= big)

    pairs: dict = {}
    splus, tplus = set(sigma.plus_covered), set(tau.plus_covered)
    for nodes, (xs, xt) in pair_of.items():
        if xs in splus and xt in tplus:
            z = project(nodes)
            if z in pairs:
                raise ValidationError("two causally compatible pairs share a visible part")
            pairs[z] = (xs, xt)

    def between(z: Config, z2: Config) -> Iterator[SymBijection]:
        big, big2 = lift(z), lift(z2)
        xs, xt = pair_of_nodes(big)
        ys, yt = pair_of_nodes(big2)
        where = {top[p]: p for p in z2}
        sync2 = {(n[1], n[2]) for n in big2 if n[0] == "B"}
        for ps in sigma.tilde.between(xs, ys):
            for pt in tau.tilde.between(xt, yt):
                if any((ps(n[1]), pt(n[2])) not in sync2 for n in big if n[0] == "B"):
                    continue
                out = []
                for p in z:
                    node = top[p]
                    image = ("A", ps(node[1])) if node[0] == "A" else ("C", pt(node[1]))
                    out.append((p, where[image]))
                yield SymBijection(frozenset(out))

    def pair_of_nodes(big: frozenset) -> tuple[frozenset, frozenset]:
        xs = frozenset(n[1] for n in big if n[0] in "AB")
        xt = frozenset(n[2] if n[0] == "B" else n[1] for n in big if n[0] in "BC")
        return xs, xt

    label = name or f"({tau.name}⊙{sigma.name})"
    meta = {"pairs": pairs, "top": top, "prime": prime, "interaction": rec, "lift": lift}
    return Strategy(es, game, display, name=label, between=between, meta=meta)


def causally_compatible_pairs(sigma: Strategy, tau: Strategy) -> list[tuple[Config, Config]]:
    """Secured matching pairs of +-covered configurations."""
    splus, tplus = set(sigma.plus_covered), set(tau.plus_covered)
    return [
        (xs, xt) for xs, xt in matching_pairs(sigma, tau)
        if xs in splus and xt in tplus and secured(sigma, tau, (xs, xt))
    ]


# -- symmetry lifting --------------------------------------------------------------


def lift_symmetry(sigma: Strategy, x: Config, psi: SymBijection) -> tuple[SymBijection, SymBijection]:
    """The unique ``(φ, θ+)`` with ``φ: x ≅ z`` in σ and ``θ+ ∘ ∂φ = ψ``."""
    found = lift_symmetry_all(sigma, x, psi)
    if len(found) != 1:
        raise ValidationError(f"{len(found)} lifts of {psi!r} at {ssorted(x)}; strategy not thin or not receptive")
    return found[0]


def lift_symmetry_all(sigma: Strategy, x: Config, psi: SymBijection) -> list[tuple[SymBijection, SymBijection]]:
    """Every lift of ``psi``, built event by event along a linear extension of ``x``.

    Partial lifts are pruned by restriction: the partial ``φ`` must be a
    symmetry of σ and ``ψ ∘ ∂φ⁻¹`` a positive symmetry of the game.
    """
    if psi.dom != sigma.disp(x):
        raise ValidationError("symmetry does not start at the display of the configuration")
    es, game = sigma.es, sigma.game
    order = bfs_order(es, x)
    out: list = []

    def grow(k: int, pairs: frozenset, image: frozenset) -> None:
        phi = SymBijection(pairs)
        if pairs and phi not in sigma.tilde:
            return
        rest = SymBijection(frozenset((sigma.display[b], psi(sigma.display[a])) for a, b in pairs))
        if pairs and rest not in game.pos:
            return
        if k == len(order):
            out.append((phi, rest))
            return
        s = order[k]
        for t in es.enabled(image):
            if es.pol(t) == es.pol(s):
                grow(k + 1, pairs | {(s, t)}, image | {t})

    grow(0, frozenset(), frozenset())
    return out


def compose_up_to_sym(
    sigma: Strategy, tau: Strategy, xs: Config, theta: SymBijection, xt: Config
) -> list[tuple[Config, Config, SymBijection, SymBijection]]:
    """Matching pairs ``(ys, yt)`` reached from a pair matching up to ``theta``.

    ``theta`` maps the middle part of ``xs`` to that of ``xt``.  Returns
    every ``(ys, yt, φσ, φτ)`` with ``φσ: xs ≅ ys`` negative on the left game,
    ``φτ: xt ≅ yt`` positive on the right game, ``φτ_B ∘ θ = φσ_B`` and the
    pair causally compatible; a thin input yields exactly one.
    """
    _check_composable(sigma, tau)
    a_game, c_game = sigma.left, tau.right
    if theta.dom != split(sigma.disp(xs), 1) or theta.cod != split(tau.disp(xt), 0):
        raise ValidationError("theta does not mediate between the two middle parts")
    out = []
    splus, tplus = set(sigma.plus_covered), set(tau.plus_covered)
    for ys, yt in matching_pairs(sigma, tau):
        if ys not in splus or yt not in tplus or len(ys) != len(xs) or len(yt) != len(xt):
            continue
        if not secured(sigma, tau, (ys, yt)):
            continue
        for ps in sigma.tilde.between(xs, ys):
            bs = sigma.boundary(ps)
            if SymBijection(_side(bs, 0)) not in a_game.neg:
                continue
            mid_s = SymBijection(_side(bs, 1))
            for pt in tau.tilde.between(xt, yt):
                bt = tau.boundary(pt)
                if SymBijection(_side(bt, 1)) not in c_game.pos:
                    continue
                if theta.then(SymBijection(_side(bt, 0))) == mid_s:
                    out.append((ys, yt, ps, pt))
    return out


def _side(th: SymBijection, tag: int) -> frozenset:
    return frozenset((a[1], b[1]) for a, b in th.pairs if a[0] == tag)


# -- tensor ---------------------------------------------------------------------------


def tensor_strategies(sigma: Strategy, tau: Strategy) -> Strategy:
    """``σ ⊗ τ`` on ``(A⊗A') ⊢ (B⊗B')``, or on ``G ⊗ G'`` for non-hom games."""
    evs = [(0, e) for e in sigma.es.events] + [(1, e) for e in tau.es.events]
    causes = [((0, a), (0, b)) for a, b in sigma.es.cover] + [((1, a), (1, b)) for a, b in tau.es.cover]
    confl = [tuple((0, e) for e in p) for p in sigma.es.conflict] + [tuple((1, e) for e in p) for p in tau.es.conflict]
    pol = {(0, e): sigma.es.pol(e) for e in sigma.es.events}
    pol.update({(1, e): tau.es.pol(e) for e in tau.es.events})
    es = EventStructure.build(evs, causes, confl, pol)
    if sigma.is_hom and tau.is_hom:
        game = hom(tensor(sigma.left, tau.left), tensor(sigma.right, tau.right))
        display = {(i, e): (s.display[e][0], (i, s.display[e][1])) for i, s in ((0, sigma), (1, tau)) for e in s.es.events}
    else:
        game = tensor(sigma.game, tau.game)
        display = {(i, e): (i, s.display[e]) for i, s in ((0, sigma), (1, tau)) for e in s.es.events}
    between = tagged_between({0: sigma.tilde, 1: tau.tilde})
    return Strategy(es, game, display, name=f"({sigma.name}⊗{tau.name})", between=between)


def interchange_witness(s1: Strategy, s2: Strategy, t1: Strategy, t2: Strategy) -> "StrategyMorphism | None":
    """Iso ``(τ⊙σ) ⊗ (τ'⊙σ') ≅ (τ⊗τ') ⊙ (σ⊗σ')``."""
    lhs = tensor_strategies(compose(s1, t1), compose(s2, t2))
    rhs = compose(tensor_strategies(s1, s2), tensor_strategies(t1, t2))
    return iso_check(lhs, rhs)


# -- isomorphism -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StrategyMorphism:
    """A map of strategies commuting with display up to positive symmetry."""

    source: Strategy
    target: Strategy
    mapping: Mapping

    def __call__(self, e):
        return self.mapping[e]

    def image(self, x: Iterable) -> frozenset:
        return frozenset(self.mapping[e] for e in x)

    def witness(self, x: Iterable) -> SymBijection:
        """The symmetry ``∂σ x ≅+ ∂τ f(x)``."""
        return SymBijection(frozenset((self.source.display[e], self.target.display[self.mapping[e]]) for e in x))


def validate_morphism(f: StrategyMorphism) -> Report:
    rep = Report(f"morphism {f.source.name} → {f.target.name}")
    src, tgt = f.source, f.target
    for a, b in itertools.permutations(src.es.events, 2):
        if src.es.leq(a, b) and not tgt.es.leq(f(a), f(b)):
            rep.add(f"{a!r} ≤ {b!r} not preserved")
    for x in src.configurations:
        if not tgt.es.is_configuration(f.image(x)) or len(f.image(x)) != len(x):
            rep.add(f"image of {ssorted(x)} is not a configuration")
        elif f.witness(x) not in src.game.pos:
            rep.add(f"display not preserved up to positive symmetry on {ssorted(x)}")
    return rep


def _event_orbits(game: Game) -> dict:
    cache = game.__dict__.setdefault("_orbits", None)
    if cache is not None:
        return cache
    es = game.es
    uf = nx.utils.UnionFind(es.events)
    by_shape: dict = {}
    for e in es.events:
        by_shape.setdefault((es.pol(e), len(es.down(e))), []).append(e)
    for group in by_shape.values():
        for i, e in enumerate(group):
            for f in group[i + 1:]:
                if uf[e] != uf[f] and any(th(e) == f for th in game.tilde.between(es.down(e), es.down(f))):
                    uf.union(e, f)
    orbit = {}
    for block in uf.to_sets():
        rep = min(block, key=skey)
        for e in block:
            orbit[e] = skey(rep)
    game.__dict__["_orbits"] = orbit
    return orbit


def _iso_graph(sigma: Strategy) -> nx.DiGraph:
    orbits = _event_orbits(sigma.game)
    g = nx.DiGraph()
    for e in sigma.es.events:
        g.add_node(e, fp=(sigma.es.pol(e), orbits[sigma.display[e]]))
    for a, b in sigma.es.cover:
        g.add_edge(a, b, kind="cause")
    for a, b in sigma.es.minimal_conflicts():
        g.add_edge(a, b, kind="conflict")
        g.add_edge(b, a, kind="conflict")
    return g


def iso_check(sigma: Strategy, tau: Strategy) -> StrategyMorphism | None:
    """An isomorphism σ ≅ τ whose display commutes up to positive symmetry."""
    if not same_game(sigma.game, tau.game) or len(sigma.es) != len(tau.es):
        return None
    if len(sigma.plus_covered) != len(tau.plus_covered):
        return None
    gs, gt = _iso_graph(sigma), _iso_graph(tau)
    matcher = DiGraphMatcher(
        gs, gt, node_match=lambda a, b: a["fp"] == b["fp"], edge_match=lambda a, b: a["kind"] == b["kind"]
    )
    pos = sigma.game.pos
    for iso in matcher.isomorphisms_iter():
        f = StrategyMorphism(sigma, tau, dict(iso))
        if all(f.witness(x) in pos for x in sigma.maximal_configurations):
            return f
    return None


# -- exponential ----------------------------------------------------------------------


def _hom_bang_source(sigma: Strategy) -> tuple[Game, int]:
    if not sigma.is_hom or sigma.left.kind != "bang":
        raise ValidationError(f"{sigma.name} is not on a game of the form !A ⊢ B")
    return sigma.left.parts[0], sigma.left.width


def promotion(sigma: Strategy, width: int, source_width: int | None = None) -> Strategy:
    """``σ!`` on ``!A ⊢ !B`` with ``width`` copies of σ.

    Copy ``i`` of σ playing in copy ``j`` of ``!A`` is displayed in copy
    ``i·w + j`` of the source, ``w`` the width of σ's own ``!A``.
    """
    a, wa = _hom_bang_source(sigma)
    need = width * wa
    if source_width is None:
        source_width = need
    if source_width < need:
        raise TruncationError(f"promotion needs {need} copies of {a.name}, only {source_width} allowed")
    evs = [(i, e) for i in range(width) for e in sigma.es.events]
    causes = [((i, u), (i, v)) for i in range(width) for u, v in sigma.es.cover]
    confl = [tuple((i, e) for e in p) for i in range(width) for p in sigma.es.conflict]
    pol = {(i, e): sigma.es.pol(e) for i, e in evs}
    es = EventStructure.build(evs, causes, confl, pol)
    display = {}
    for i, e in evs:
        tag, m = sigma.display[e]
        if tag == 1:
            display[(i, e)] = (1, (i, m))
        else:
            j, ev = m
            display[(i, e)] = (0, (i * wa + j, ev))
    game = hom(bang(a, source_width), bang(sigma.right, width))
    return Strategy(es, game, display, name=f"{sigma.name}!", between=_bang_copies_between(sigma.tilde))


def widen_source(sigma: Strategy, width: int) -> Strategy:
    """σ with its source ``!A`` enlarged to ``width`` copies (unused ones stay idle)."""
    a, wa = _hom_bang_source(sigma)
    if width < wa:
        raise TruncationError(f"cannot shrink the source of {sigma.name} below {wa} copies")
    return Strategy(
        sigma.es, hom(bang(a, width), sigma.right), dict(sigma.display), name=sigma.name, between=sigma.tilde.between
    )


def projection(a1: Game, a2: Game, index: int, width: int) -> Strategy:
    """``π_index`` from ``!(a1 & a2)`` to ``a_index``, copycat on copy 0."""
    target = (a1, a2)[index]
    es = _copycat_es(target)
    display = {(0, e): (0, (0, (index, e))) for e in target.es.events}
    display.update({(1, e): (1, e) for e in target.es.events})
    game = hom(bang(with_product(a1, a2), width), target)
    return Strategy(es, game, display, name=f"π{index + 1}", between=copycat(target).tilde.between)


def pairing(sigma: Strategy, tau: Strategy) -> Strategy:
    """``⟨σ, τ⟩`` on ``!Γ ⊢ A & B``."""
    _hom_bang_source(sigma)
    _hom_bang_source(tau)
    if not same_game(sigma.left, tau.left):
        raise ValidationError("pairing needs a shared context")
    for s in (sigma, tau):
        for e in s.es.minimal_events():
            if s.display[e][0] != 1 or s.es.pol(e) != "-":
                raise ValidationError(f"{s.name} has a minimal event outside Opponent's opening moves")
    evs = [(0, e) for e in sigma.es.events] + [(1, e) for e in tau.es.events]
    causes = [((0, a), (0, b)) for a, b in sigma.es.cover] + [((1, a), (1, b)) for a, b in tau.es.cover]
    confl = [tuple((0, e) for e in p) for p in sigma.es.conflict] + [tuple((1, e) for e in p) for p in tau.es.conflict]
    confl += [((0, a), (1, b)) for a in sigma.es.minimal_events() for b in tau.es.minimal_events()]
    pol = {(0, e): sigma.es.pol(e) for e in sigma.es.events}
    pol.update({(1, e): tau.es.pol(e) for e in tau.es.events})
    es = EventStructure.build(evs, causes, confl, pol)
    display = {}
    for k, s in ((0, sigma), (1, tau)):
        for e in s.es.events:
            tag, m = s.display[e]
            display[(k, e)] = (0, m) if tag == 0 else (1, (k, m))
    game = hom(sigma.left, with_product(sigma.right, tau.right))
    between = tagged_between({0: sigma.tilde, 1: tau.tilde})
    return Strategy(es, game, display, name=f"⟨{sigma.name},{tau.name}⟩", between=between)


def curry(sigma: Strategy) -> Strategy:
    """``Λ(σ)`` from ``!(Γ & A) ⊢ B`` to ``!Γ ⊢ (!A ⊸ B)``, reusing copy indices."""
    ctx, width = _hom_bang_source(sigma)
    if ctx.kind != "with":
        raise ValidationError(f"{sigma.name} does not have a context of the form !(Γ & A)")
    gamma, arg = ctx.parts
    b = sigma.right
    b_roots = set(b.es.minimal_events())
    display = {}
    for e in sigma.es.events:
        tag, m = sigma.display[e]
        if tag == 1:
            display[e] = (1, (1, m))
            continue
        i, (side, ev) = m
        if side == 0:
            display[e] = (0, (i, ev))
            continue
        roots = {sigma.display[d][1] for d in sigma.es.down(e)
                 if sigma.display[d][0] == 1 and sigma.display[d][1] in b_roots}
        if len(roots) != 1:
            raise ValidationError(f"argument move {e!r} does not sit below a unique result root")
        display[e] = (1, (0, roots.pop(), (i, ev)))
    game = hom(bang(gamma, width), lolli(bang(arg, width), b))
    return Strategy(sigma.es, game, display, name=f"Λ({sigma.name})", between=sigma.tilde.between)


def evaluation(a: Game, b: Game, arg_width: int, width: int | None = None) -> Strategy:
    """``ev`` from ``!((!A ⊸ B) & A)`` to ``B``.

    Copycat on ``!A ⊸ B`` whose right-hand copy ``i`` of ``A`` is played in
    copy ``i + 1`` of the context; copy 0 holds the function.
    """
    width = arg_width + 1 if width is None else width
    if width < arg_width + 1:
        raise TruncationError(f"evaluation needs {arg_width + 1} context copies, only {width} allowed")
    fun = lolli(bang(a, arg_width), b)
    es = _copycat_es(fun)
    display = {}
    for f in fun.es.events:
        display[(0, f)] = (0, (0, (0, f)))
        if f[0] == 1:
            display[(1, f)] = (1, f[1])
        else:
            _, _, (i, ev) = f
            display[(1, f)] = (0, (i + 1, (1, ev)))
    game = hom(bang(with_product(fun, a), width), b)
    return Strategy(es, game, display, name="ev", between=copycat(fun).tilde.between)


# -- text format ------------------------------------------------------------------------


def _compact(x) -> str:
    return repr(x).replace(" ", "")


def dump_strategy(sigma: Strategy) -> str:
    ids = numbering(sigma.es)
    out = [f"game {sigma.game.name}", dump_es(sigma.es, ids).rstrip("\n")]
    if sigma.meta.get("family") == "identities":
        out.append("family identities")
    for e in sigma.es.events:
        out.append(f"display {ids[e]} -> {_compact(sigma.display[e])}")
    return "\n".join(out) + "\n"


def parse_strategy(text: str, name: str = "σ", base=None) -> Strategy:
    """Parse ``game``, event-structure and ``display <id> -> <move>`` lines.

    Moves are written as nested tuples, e.g. ``(1,(0,0,1))``; a bare
    integer refers to the game's own numbering when its events are not ints.
    ``family identities`` declares that the strategy has no non-trivial
    symmetries; by default they are induced from the game.
    """
    lines = tokenize(text)
    game_lines = [(no, toks) for no, toks in lines if toks[0] == "game"]
    if len(game_lines) != 1:
        raise ParseError("expected exactly one 'game <expression>' line")
    no, toks = game_lines[0]
    try:
        game = load_game(" ".join(toks[1:]), base)
    except ValidationError as err:
        raise ParseError(str(err), no) from None
    es, rest = parse_es_lines([(n, t) for n, t in lines if t[0] != "game"])
    ids = numbering(game.es)
    by_id = {v: k for k, v in ids.items()}
    display = {}
    family = "induced"
    for no, toks in rest:
        if toks[0] == "family":
            if len(toks) != 2 or toks[1] not in ("induced", "identities"):
                raise ParseError("expected: family induced|identities", no)
            family = toks[1]
            continue
        if toks[0] != "display":
            raise ParseError(f"unknown directive {toks[0]!r}", no)
        if len(toks) < 4 or toks[2] != "->":
            raise ParseError("expected: display <id> -> <move>", no)
        e = int(toks[1]) if toks[1].lstrip("-").isdigit() else None
        if e not in es:
            raise ParseError(f"unknown event {toks[1]}", no)
        try:
            move = ast.literal_eval("".join(toks[3:]))
        except (ValueError, SyntaxError):
            raise ParseError(f"cannot read move {' '.join(toks[3:])!r}", no) from None
        if move not in game.es and isinstance(move, int):
            move = by_id.get(move, move)
        if move not in game.es:
            raise ParseError(f"{move!r} is not a move of {game.name}", no)
        display[e] = move
    missing = [e for e in es.events if e not in display]
    if missing:
        raise ParseError(f"no display for events {missing}")
    if family == "identities":
        return Strategy(es, game, display, name=name, between=IsoFamily.identities(es).between,
                        meta={"family": "identities"})
    return Strategy(es, game, display, name=name)


_COLOUR = {"+": "forestgreen", "-": "firebrick", ".": "gray40"}


def strategy_dot(sigma: Strategy, name: str = "strategy") -> str:
    """Strategy causality as arrows, game causality dotted, conflict wiggly."""
    ids = numbering(sigma.es)
    out = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for e in sigma.es.events:
        out.append(f'  "{ids[e]}" [label="{_compact(sigma.display[e])}{sigma.es.pol(e)}", '
                   f"fontcolor={_COLOUR[sigma.es.pol(e)]}];")
    game_cover = sigma.game.es.cover
    for a, b in sorted(sigma.es.cover, key=lambda p: (ids[p[0]], ids[p[1]])):
        out.append(f'  "{ids[a]}" -> "{ids[b]}";')
    for a, b in itertools.permutations(sigma.es.events, 2):
        if (sigma.display[a], sigma.display[b]) in game_cover and (a, b) not in sigma.es.cover:
            out.append(f'  "{ids[a]}" -> "{ids[b]}" [style=dotted];')
    for a, b in sorted(sigma.es.minimal_conflicts(), key=lambda p: (ids[p[0]], ids[p[1]])):
        out.append(f'  "{ids[a]}" -> "{ids[b]}" [dir=none, style=dashed, label="~"];')
    out.append("}")
    return "\n".join(out) + "\n"
