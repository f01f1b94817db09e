"""Collapsing strategies to distributors.

A strategy ``σ : A ⊢ B`` becomes the distributor whose witnesses at
``(x_A, x_B)`` are triples ``(θ⁻, z, θ⁺)``: ``z`` a +-covered configuration
of σ, ``θ⁻ : x_A ≅⁻ z_A`` and ``θ⁺ : z_B ≅⁺ x_B``.  Groupoids act by lifting
the resulting symmetry of ``∂z`` through σ.

With ``complete=True`` only complete configurations (payoff 0) are kept
as objects, which is the collapse used for winning strategies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .dist import (
    CoendClass,
    Distributor,
    FamilyGroupoid,
    FullSubgroupoid,
    Functor,
    NatTransform,
    OpMor,
    OppositeGroupoid,
    ProductGroupoid,
    Prom,
    SumGroupoid,
    SymGroupoid,
    SymMor,
    conjoint_species,
    dereliction_i,
    dist_compose,
    dist_identity,
    groupoid_equivalence_check,
    promotion_dagger,
    restrict_left,
    validate_nat,
)
from .games import Game, copies, family_config, inj, lolli, lolli_config, lolli_split, split
from .strategies import (
    Config,
    Strategy,
    StrategyMorphism,
    _side,
    as_hom,
    cc_config,
    compose,
    copycat,
    iso_check,
    lift_symmetry,
)
from .symmetry import SymBijection, factorize
from .util import Report, ValidationError, ssorted


@dataclass(frozen=True)
class PositiveWitness:
    """``(θ⁻, z, θ⁺)`` with ``θ⁻ : x_A ≅⁻ z_A`` and ``θ⁺ : z_B ≅⁺ x_B``."""

    neg: SymBijection
    config: Config
    pos: SymBijection

    def __repr__(self) -> str:
        return f"⟨{len(self.config)}:{ssorted(self.neg.cod)}|{ssorted(self.pos.dom)}⟩"


# -- groupoids of configurations ---------------------------------------------------

_GROUPOIDS: dict = {}


def config_groupoid(game: Game, complete: bool = False) -> FamilyGroupoid:
    """``C̃(G)``, or ``C̃₀(G)`` (complete configurations) when ``complete``."""
    key = (id(game), complete)
    hit = _GROUPOIDS.get(key)
    if hit is not None and hit[0] is game:
        return hit[1]
    objs = game.complete if complete else game.configurations
    name = f"{'C0' if complete else 'C'}~({game.name})"

    def member(x: frozenset) -> bool:
        return game.es.is_configuration(x) and (not complete or game.kappa(x) == 0)

    g = FamilyGroupoid(game.tilde, objs, name=name, member=member)
    _GROUPOIDS[key] = (game, g)
    return g


# -- collapse of one strategy ------------------------------------------------------------


def _sides(sigma: Strategy, z: Config) -> tuple[frozenset, frozenset]:
    d = sigma.disp(z)
    return split(d, 0), split(d, 1)


def _join(left: SymBijection, right: SymBijection) -> SymBijection:
    pairs = frozenset(((0, a), (0, b)) for a, b in left.pairs) | frozenset(((1, a), (1, b)) for a, b in right.pairs)
    return SymBijection(pairs)


class CollapsedStrategy(Distributor):
    """``⟦σ⟧ : C̃(A) ↦ C̃(B)`` for a strategy ``σ`` on ``A ⊢ B``."""

    def __init__(self, sigma: Strategy, complete: bool = False, max_size: int | None = None):
        sigma = as_hom(sigma)
        self.strategy = sigma
        self.complete = complete
        a, b = sigma.left, sigma.right
        self.A, self.B = a, b
        src, tgt = config_groupoid(a, complete), config_groupoid(b, complete)
        self._by_sides: dict = {}
        self._lifts: dict = {}
        if max_size is None:
            covered = sigma.plus_covered
        else:
            # only witnesses at points with at most max_size moves are needed
            es = sigma.es
            covered = [x for x in es.configurations(max_size) if all(es.pol(e) == "+" for e in es.maximal(x))]
        for z in covered:
            za, zb = _sides(sigma, z)
            if complete and (za not in src or zb not in tgt):
                continue
            self._by_sides.setdefault((len(za), len(zb)), []).append((z, za, zb))
        super().__init__(src, tgt, self._witnesses, self._left, self._right, name=f"[{sigma.name}]")

    def _witnesses(self, xa: frozenset, xb: frozenset):
        for z, za, zb in self._by_sides.get((len(xa), len(xb)), ()):
            negs = self.A.neg.between(xa, za)
            if not negs:
                continue
            for tp in self.B.pos.between(zb, xb):
                for tn in negs:
                    yield PositiveWitness(tn, z, tp)

    def act(self, w: PositiveWitness, f: SymBijection, g: SymBijection) -> PositiveWitness:
        """``g · w · f`` for ``f : y_A → x_A`` and ``g : x_B → y_B``."""
        psi = _join(f.then(w.neg).inverse(), w.pos.then(g))
        key = (w.config, psi)
        hit = self._lifts.get(key)
        if hit is None:
            phi, rho = lift_symmetry(self.strategy, w.config, psi)
            hit = (phi.cod, SymBijection(_side(rho, 0)).inverse(), SymBijection(_side(rho, 1)))
            self._lifts[key] = hit
        return PositiveWitness(hit[1], hit[0], hit[2])

    def _left(self, g: SymBijection, w: PositiveWitness) -> PositiveWitness:
        if g.is_identity():
            return w
        return self.act(w, SymBijection.identity(w.neg.dom), g)

    def _right(self, w: PositiveWitness, f: SymBijection) -> PositiveWitness:
        if f.is_identity():
            return w
        return self.act(w, f, SymBijection.identity(w.pos.cod))


def collapse_strategy(sigma: Strategy, complete: bool = False, max_size: int | None = None) -> CollapsedStrategy:
    """``⟦σ⟧``; with ``max_size`` only points of at most that many moves are populated."""
    return CollapsedStrategy(sigma, complete, max_size)


def all_points(d: Distributor) -> list[tuple]:
    """Every ``(a, b)`` with a non-empty witness set."""
    return [(a, b) for a in d.source.objects() for b in d.target.objects() if d.at(a, b)]


# -- functoriality on composition ------------------------------------------------------


@dataclass
class PcompReport:
    """Counts behind the comparison ``⟦τ⊙σ⟧ → ⟦τ⟧ • ⟦σ⟧`` at each point."""

    points: dict  # point -> (composite witnesses, coend classes, distinct images)
    report: Report

    @property
    def injective(self) -> bool:
        return all(n == k for n, _, k in self.points.values())

    @property
    def surjective(self) -> bool:
        return all(m == k for _, m, k in self.points.values())

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def pcomp(sigma: Strategy, tau: Strategy, complete: bool = False, comp: Strategy | None = None):
    """``⟦τ⊙σ⟧ → ⟦τ⟧ • ⟦σ⟧`` sending a witness to the class of its split pair.

    Returns ``(⟦τ⊙σ⟧, ⟦τ⟧ • ⟦σ⟧, transformation)``.  Pass ``comp`` to reuse an
    already built composite.
    """
    sigma, tau = as_hom(sigma), as_hom(tau)
    if comp is None:
        comp = compose(sigma, tau)
    dc = collapse_strategy(comp, complete)
    ds, dt = collapse_strategy(sigma, complete), collapse_strategy(tau, complete)
    both = dist_compose(ds, dt)
    pairs = comp.meta["pairs"]

    def component(a, c, w: PositiveWitness) -> CoendClass:
        xs, xt = pairs[w.config]
        mid = split(sigma.disp(xs), 1)
        if complete and mid not in ds.target:
            raise ValidationError(f"mediating configuration {ssorted(mid)} is not complete")
        ident = SymBijection.identity(mid)
        return both.canon(a, c, mid, PositiveWitness(w.neg, xs, ident), PositiveWitness(ident, xt, w.pos))

    return dc, both, NatTransform(dc, both, component, name="pcomp")


def pcomp_report(sigma: Strategy, tau: Strategy, complete: bool = False,
                 points: Iterable[tuple] | None = None, naturality: bool = True) -> PcompReport:
    dc, both, nt = pcomp(sigma, tau, complete)
    pts = list(points) if points is not None else sorted(
        set(all_points(dc)) | set(all_points(both)), key=lambda p: (len(p[0]), len(p[1]), repr(p)))
    rep = validate_nat(nt, pts) if naturality else Report("pcomp")
    counts = {}
    for a, c in pts:
        images = set()
        for w in dc.at(a, c):
            try:
                images.add(nt(a, c, w))
            except ValidationError as exc:
                rep.add(str(exc))
        counts[(a, c)] = (dc.count(a, c), both.count(a, c), len(images))
    return PcompReport(counts, rep)


# -- identities ------------------------------------------------------------------------------


def pid(game: Game, complete: bool = False):
    """``⟦cc_A⟧ ≅ id``: ``(θ⁻, cc_z, θ⁺) ↦ θ⁺∘θ⁻``, inverted by factorization.

    Returns ``(⟦cc_A⟧, id, forward, backward)``.
    """
    d = collapse_strategy(copycat(game), complete)
    ident = dist_identity(d.source)

    def forward(x, y, w: PositiveWitness) -> SymBijection:
        return w.neg.then(w.pos)

    def backward(x, y, th: SymBijection) -> PositiveWitness:
        neg, pos = factorize(game.tcg, th)
        return PositiveWitness(neg, cc_config(neg.cod), pos)

    return d, ident, NatTransform(d, ident, forward, name="pid"), NatTransform(ident, d, backward, name="pid⁻¹")


def collapse_iso(f: StrategyMorphism, source: CollapsedStrategy, target: CollapsedStrategy) -> NatTransform:
    """``⟦f⟧ : ⟦σ⟧ ≅ ⟦τ⟧`` for an isomorphism of strategies."""

    def component(a, b, w: PositiveWitness) -> PositiveWitness:
        th = f.witness(w.config)
        ta, tb = SymBijection(_side(th, 0)), SymBijection(_side(th, 1))
        return PositiveWitness(w.neg.then(ta), f.image(w.config), tb.inverse().then(w.pos))

    return NatTransform(source, target, component, name=f"[{f.source.name}≅{f.target.name}]")


def unit_triangle(sigma: Strategy, complete: bool = False, points: Iterable[tuple] | None = None) -> Report:
    """The right unit triangle for ``ρ_σ : σ ⊙ cc_A ≅ σ``.

    For each witness ``w`` of ``⟦σ⊙cc_A⟧``, transporting ``w`` along ``⟦ρ_σ⟧``
    must agree with splitting it by ``pcomp``, collapsing the copycat half
    by ``pid`` and acting with the resulting symmetry.
    """
    sigma = as_hom(sigma)
    cc = copycat(sigma.left)
    comp = compose(cc, sigma)
    iso = iso_check(comp, sigma)
    if iso is None:
        return Report(f"unit triangle for {sigma.name}", ["σ ⊙ cc is not isomorphic to σ"])
    dcomp, both, nt = pcomp(cc, sigma, complete, comp=comp)
    dsig = collapse_strategy(sigma, complete)
    transport = collapse_iso(iso, dcomp, dsig)
    _, _, fwd, _ = pid(sigma.left, complete)
    rep = Report(f"unit triangle for {sigma.name}")
    pts = list(points) if points is not None else all_points(dcomp)
    for a, b in pts:
        for w in dcomp.at(a, b):
            cls = nt(a, b, w)
            f = fwd(cls.src, cls.mid, cls.first)  # a → mid
            via_pid = dsig.right(cls.second, f)
            direct = transport(a, b, w)
            if via_pid != direct:
                rep.add(f"triangle fails at {w!r}: {via_pid!r} vs {direct!r}")
    return rep


# -- the exponential: L! and R! --------------------------------------------------------------------


@dataclass
class Equivalence:
    """Functors ``L ⊣ R`` with unit and counit, ready for checking."""

    L: Functor
    R: Functor
    unit: object
    counit: object
    name: str

    def check(self) -> Report:
        return groupoid_equivalence_check(self.L, self.R, self.unit, self.counit, self.name)


def _family_positions(x: Iterable) -> list:
    return sorted(copies(x))


def bang_functors(game: Game, width: int, maxlen: int | None = None) -> Equivalence:
    """``L! : Sym(C̃₀A) → C̃₀(!A)`` and its inverse ``R!``.

    ``L!`` places the ``i``-th configuration in copy ``i``; ``R!`` lists the
    non-empty copies in index order.
    """
    from .games import bang as bang_game

    bg = bang_game(game, width)
    base = config_groupoid(game, complete=True)
    sym = SymGroupoid(base, width if maxlen is None else maxlen)
    target = config_groupoid(bg, complete=True)

    def L_obj(seq: tuple) -> frozenset:
        return family_config({i: x for i, x in enumerate(seq) if x})

    def L_mor(f: SymMor) -> SymBijection:
        pairs = set()
        for i, c in enumerate(f.comps):
            for a, b in c.pairs:
                pairs.add(((f.perm[i], a), (i, b)))
        return SymBijection(frozenset(pairs))

    def R_obj(x: frozenset) -> tuple:
        cx = copies(x)
        return tuple(cx[i] for i in sorted(cx))

    def R_mor(th: SymBijection) -> SymMor:
        rx, ry = _family_positions(th.dom), _family_positions(th.cod)
        where = {j: k for k, j in enumerate(rx)}
        perm = [None] * len(ry)
        comps: list = [None] * len(ry)
        for m, j in enumerate(ry):
            back = {(i, a) for (i, a), (jj, b) in th.pairs if jj == j}
            (src,) = {i for i, _ in back}
            perm[m] = where[src]
            comps[m] = SymBijection(frozenset((a, b) for (i, a), (jj, b) in th.pairs if jj == j))
        return SymMor(tuple(perm), tuple(comps), R_obj(th.dom), R_obj(th.cod))

    L = Functor(sym, target, L_obj, L_mor, name="L!")
    R = Functor(target, sym, R_obj, R_mor, name="R!")

    def unit(seq: tuple) -> SymMor:
        back = R_obj(L_obj(seq))
        if back != tuple(seq):
            raise ValidationError(f"{len(seq)} positions collapse to {len(back)} copies")
        return sym.identity(tuple(seq))

    def counit(x: frozenset) -> SymBijection:
        rx = _family_positions(x)
        return SymBijection(frozenset(((k, a), (j, a)) for k, j in enumerate(rx) for a in copies(x)[j]))

    eq = Equivalence(L, R, unit, counit, name=f"L!/R! on {game.name} (width {width})")
    eq.bang = bg  # type: ignore[attr-defined]
    return eq


def with_functors(left: Game, right: Game) -> Equivalence:
    """``L& : C̃₀A + C̃₀B → C̃₀(A & B)`` and its inverse."""
    from .games import with_product

    g = with_product(left, right)
    src = SumGroupoid(config_groupoid(left, True), config_groupoid(right, True))
    tgt = config_groupoid(g, True)

    def L_obj(c):
        tag, x = c
        return inj(tag, x)

    def L_mor(f):
        tag, th = f
        return SymBijection(frozenset(((tag, a), (tag, b)) for a, b in th.pairs))

    def R_obj(x: frozenset):
        (tag,) = {t for t, _ in x}
        return (tag, split(x, tag))

    def R_mor(th: SymBijection):
        tag, _ = R_obj(th.dom)
        return (tag, SymBijection(_side(th, tag)))

    L = Functor(src, tgt, L_obj, L_mor, name="L&")
    R = Functor(tgt, src, R_obj, R_mor, name="R&")
    eq = Equivalence(L, R, src.identity, tgt.identity, name=f"L&/R& on {left.name}, {right.name}")
    eq.game = g  # type: ignore[attr-defined]
    return eq


def arrow_functors(arg: Game, res: Game, width: int) -> Equivalence:
    """``L⇒ : Sym(C̃₀A)^op × C̃₀B → C̃₀(!A ⊸ B)`` and its inverse."""
    bang_eq = bang_functors(arg, width)
    g = lolli(bang_eq.bang, res)
    sym = bang_eq.L.source
    src = ProductGroupoid(OppositeGroupoid(sym), config_groupoid(res, True))
    tgt = config_groupoid(g, True)
    Lb, Rb = bang_eq.L, bang_eq.R

    def L_obj(c):
        seq, xb = c
        return lolli_config(g, Lb(seq), xb)

    def L_mor(f):
        op, tb = f
        ta = Lb.map(sym.inverse(op.mor))
        rx, ry = _root(tb.dom, res), _root(tb.cod, res)
        pairs = frozenset(((1, a), (1, b)) for a, b in tb.pairs)
        pairs |= frozenset(((0, rx, a), (0, ry, b)) for a, b in ta.pairs)
        return SymBijection(pairs)

    def R_obj(x: frozenset):
        xa, xb = lolli_split(x)
        return (Rb(xa), xb)

    def R_mor(th: SymBijection):
        ta = SymBijection(frozenset((a[2], b[2]) for a, b in th.pairs if a[0] == 0))
        tb = SymBijection(_side(th, 1))
        return (OpMor(sym.inverse(Rb.map(ta))), tb)

    def unit(c):
        return src.identity(c)

    def counit(x: frozenset) -> SymBijection:
        xa, xb = lolli_split(x)
        eps = bang_eq.counit(xa)
        r = _root(xb, res)
        pairs = frozenset(((1, b), (1, b)) for b in xb)
        pairs |= frozenset(((0, r, a), (0, r, b)) for a, b in eps.pairs)
        return SymBijection(pairs)

    L = Functor(src, tgt, L_obj, L_mor, name="L⇒")
    R = Functor(tgt, src, R_obj, R_mor, name="R⇒")
    eq = Equivalence(L, R, unit, counit, name=f"L⇒/R⇒ on {arg.name}, {res.name} (width {width})")
    eq.game = g  # type: ignore[attr-defined]
    return eq


def _root(xb: Iterable, res: Game):
    roots = [e for e in xb if not res.es.preds(e)]
    return roots[0] if roots else None


def seely_functors(left, right, maxlen: int) -> Equivalence:
    """``Sym(A + B) ≃ Sym(A) × Sym(B)`` restricted to total length ``maxlen``.

    Takes groupoids.  The forward functor splits a sequence by tag keeping
    the order within each side; the inverse concatenates.
    """
    total = SumGroupoid(left, right)
    src = SymGroupoid(total, maxlen)
    sa, sb = SymGroupoid(left, maxlen), SymGroupoid(right, maxlen)
    prod = ProductGroupoid(sa, sb)
    tgt = FullSubgroupoid(prod, [(s, t) for s, t in prod.objects() if len(s) + len(t) <= maxlen],
                          name=f"{prod.name}|≤{maxlen}")

    def positions(seq: tuple, tag: int) -> list[int]:
        return [i for i, (t, _) in enumerate(seq) if t == tag]

    def S_obj(seq: tuple):
        return (tuple(seq[i][1] for i in positions(seq, 0)), tuple(seq[i][1] for i in positions(seq, 1)))

    def S_mor(f: SymMor):
        out = []
        for tag, base in ((0, sa), (1, sb)):
            dpos, cpos = positions(f.dom, tag), positions(f.cod, tag)
            rank = {p: k for k, p in enumerate(dpos)}
            perm = tuple(rank[f.perm[i]] for i in cpos)
            comps = tuple(f.comps[i][1] for i in cpos)
            out.append(SymMor(perm, comps, S_obj(f.dom)[tag], S_obj(f.cod)[tag]))
        return tuple(out)

    def T_obj(pair):
        s, t = pair
        return tuple((0, x) for x in s) + tuple((1, y) for y in t)

    def T_mor(fg):
        f, g = fg
        n = len(f.perm)
        perm = tuple(f.perm) + tuple(n + p for p in g.perm)
        comps = tuple((0, c) for c in f.comps) + tuple((1, c) for c in g.comps)
        return SymMor(perm, comps, T_obj((f.dom, g.dom)), T_obj((f.cod, g.cod)))

    def unit(seq: tuple) -> SymMor:
        order = positions(seq, 0) + positions(seq, 1)
        return src.permutation(tuple(seq), order)

    def counit(pair):
        return tgt.identity(pair)

    S = Functor(src, tgt, S_obj, S_mor, name="seely")
    T = Functor(tgt, src, T_obj, T_mor, name="seely⁻¹")
    return Equivalence(S, T, unit, counit, name=f"Seely on {left.name} + {right.name} (≤{maxlen})")


# -- the Kleisli collapse ---------------------------------------------------------------------------


def collapse_kleisli(sigma: Strategy, maxlen: int | None = None) -> Distributor:
    """``⟦σ⟧! = ⟦σ⟧[L!] : Sym(C̃₀A) ↦ C̃₀B`` for a winning ``σ`` on ``!A ⊢ B``."""
    sigma = as_hom(sigma)
    if sigma.left.kind != "bang":
        raise ValidationError(f"{sigma.name} is not on a game !A ⊢ B")
    a, width = sigma.left.parts[0], sigma.left.width
    eq = bang_functors(a, width, maxlen)
    d = collapse_strategy(sigma, complete=True)
    out = restrict_left(d, eq.L)
    out.base = d  # type: ignore[attr-defined]
    out.functors = eq  # type: ignore[attr-defined]
    return out


def pder(game: Game, width: int):
    """``⟦der_A⟧! ≅ i_A``: a witness goes to ``θ⁺∘θ₀`` on the single copy.

    Returns ``(⟦der⟧!, i_A, transformation)``.
    """
    from .strategies import dereliction

    d = collapse_kleisli(dereliction(game, width))
    base = config_groupoid(game, True)
    ider = dereliction_i(base, width)

    def component(seq: tuple, b, w: PositiveWitness) -> SymMor:
        if len(seq) != 1:
            raise ValidationError("dereliction witnesses live over one-element sequences")
        theta0 = SymBijection(frozenset((u[1], v[1]) for u, v in w.neg.pairs))
        return theta0.then(w.pos)

    return d, ider, NatTransform(d, ider, component, name="pder")


def pprom(sigma: Strategy, width: int):
    """``⟦σ!⟧[L!, L!] ≅ (⟦σ⟧!)†`` by reading off blocks from the copy indices.

    A witness of the promotion sends position ``k`` of the source sequence
    into copy ``i·w + j``; position ``k`` joins block ``i`` and copy ``j``
    orders it inside the block.  Returns ``(lhs, rhs, transformation)``.
    """
    from .strategies import promotion

    sigma = as_hom(sigma)
    a, wa = sigma.left.parts[0], sigma.left.width
    kl = collapse_kleisli(sigma, width * wa)
    dag = promotion_dagger(kl, width)
    prom = promotion(sigma, width)
    big = collapse_strategy(prom, complete=True)
    src_eq = bang_functors(a, width * wa)
    tgt_eq = bang_functors(sigma.right, width)
    lhs = restrict_left(big, src_eq.L)
    lhs = Distributor(lhs.source, dag.target, lambda s, t: big.at(src_eq.L(s), tgt_eq.L(t)),
                      lambda g, w: big.left(tgt_eq.L.map(g), w), lambda w, f: big.right(w, src_eq.L.map(f)),
                      name=f"[{prom.name}]!")
    if lhs.source.name != dag.source.name:
        raise ValidationError("Sym truncations of the two sides differ")

    def component(src: tuple, tgt: tuple, w: PositiveWitness) -> Prom:
        blocks: list = [[] for _ in tgt]
        inner: list = [[] for _ in tgt]
        for k in range(len(src)):
            ev = next(v for u, v in w.neg.pairs if u[0] == k)
            copy = ev[0]
            i, j = divmod(copy, wa)
            blocks[i].append((j, k))
        parts = []
        for i in range(len(tgt)):
            order = sorted(blocks[i], key=lambda p: p[1])
            zi = frozenset(e for c, e in w.config if c == i)
            neg = SymBijection(frozenset(((rank, u[1]), (v[0] % wa, v[1]))
                                         for rank, (_, k) in enumerate(order)
                                         for u, v in w.neg.pairs if u[0] == k))
            pos = SymBijection(frozenset((u[1], v[1]) for u, v in w.pos.pairs if u[0] == i))
            parts.append(PositiveWitness(neg, zi, pos))
            inner[i] = tuple(k for _, k in order)
        return Prom(tuple(tuple(b) for b in inner), tuple(parts))

    return lhs, dag, NatTransform(lhs, dag, component, name="pprom")


def kleisli_pcomp(sigma: Strategy, tau: Strategy, width: int):
    """``⟦τ ⊙ σ!⟧! → ⟦τ⟧! ∘ ⟦σ⟧!`` in the Kleisli category of species.

    Splits by ``pcomp``, moves the middle configuration of ``!B`` to its
    sequence of copies with the counit of ``L! ⊣ R!``, then reads the
    promotion half through ``pprom``.  Returns ``(lhs, rhs, transformation)``.
    """
    from .strategies import promotion

    sigma, tau = as_hom(sigma), as_hom(tau)
    tw = tau.left.width
    if tw != width:
        raise ValidationError(f"τ uses {tw} copies of its source, the promotion provides {width}")
    wa = sigma.left.width
    prom = promotion(sigma, width)
    dc, both, nt = pcomp(prom, tau, complete=True)
    aeq = bang_functors(sigma.left.parts[0], width * wa)
    lhs = restrict_left(dc, aeq.L)
    plhs, dag, pp = pprom(sigma, width)
    ktau = collapse_kleisli(tau, width)
    rhs = dist_compose(dag, ktau, name=f"({tau.name} ∘ {sigma.name})!")
    beq = bang_functors(sigma.right, width)
    ds, dt = both.parts

    def component(seq: tuple, c, w: PositiveWitness) -> CoendClass:
        cls = nt(aeq.L(seq), c, w)
        x = cls.mid
        mid = beq.R(x)
        eps = beq.counit(x)  # L!R!x → x
        first = ds.left(eps.inverse(), cls.first)
        second = dt.right(cls.second, eps)
        return rhs.canon(seq, c, mid, pp(seq, mid, first), second)

    return lhs, rhs, NatTransform(lhs, rhs, component, name="pcomp!")


def projection_species(left: Game, right: Game, index: int, width: int):
    """``⟦π_i⟧!`` next to the conjoint species of the injection ``C̃₀A_i → C̃₀(A₁&A₂)``."""
    from .strategies import projection

    pi = projection(left, right, index, width)
    k = collapse_kleisli(pi)
    weq = with_functors(left, right)
    part = config_groupoid((left, right)[index], True)
    F = Functor(part, weq.L.target, lambda x: inj(index, x),
                lambda th: SymBijection(frozenset(((index, a), (index, b)) for a, b in th.pairs)),
                name=f"inj{index + 1}")
    conj = conjoint_species(F, width)
    return k, conj


def class_counts(d: Distributor, points: Iterable[tuple]) -> dict:
    return {p: d.count(*p) for p in points}


def sequence_points(sym: SymGroupoid, target, limit: int | None = None) -> list[tuple]:
    pts = [(s, b) for s in sym.objects() for b in target.objects()]
    return pts if limit is None else pts[:limit]


__all__ = [
    "CollapsedStrategy",
    "Equivalence",
    "PcompReport",
    "PositiveWitness",
    "all_points",
    "arrow_functors",
    "bang_functors",
    "class_counts",
    "collapse_iso",
    "collapse_kleisli",
    "collapse_strategy",
    "config_groupoid",
    "kleisli_pcomp",
    "pcomp",
    "pcomp_report",
    "pder",
    "pid",
    "pprom",
    "projection_species",
    "seely_functors",
    "sequence_points",
    "unit_triangle",
    "with_functors",
]
