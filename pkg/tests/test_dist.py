from __future__ import annotations

import functools
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from networkx.utils import UnionFind

from gamecollapse.dist import (
    Arrow,
    DiscreteGroupoid,
    ExplicitGroupoid,
    Distributor,
    Functor,
    OppositeGroupoid,
    ProductGroupoid,
    SumGroupoid,
    SymGroupoid,
    SymMor,
    associator,
    check_class_map,
    companion,
    companion_species,
    conjoint,
    dereliction_i,
    dist_compose,
    dist_identity,
    esp_compose,
    eta_iso,
    find_natural_iso,
    groupoid_equivalence_check,
    identity_functor,
    left_unitor,
    mu_iso,
    promotion_dagger,
    restrict_left,
    right_unitor,
    theta_iso,
    validate_distributor,
    validate_functor,
    validate_groupoid,
    validate_nat,
    xi_iso,
    NatTransform,
)


def cyclic(n: int, name: str = "Z") -> ExplicitGroupoid:
    """One object with the cyclic group of order n."""
    arrows = [Arrow(f"{name}{k}", "*", "*") for k in range(n)]
    table = {(f"{name}{i}", f"{name}{j}"): f"{name}{(i + j) % n}" for i in range(n) for j in range(n)}
    return ExplicitGroupoid(["*"], arrows, table, {"*": f"{name}0"}, name=f"{name}{n}")


def codiscrete(objs, name: str = "K") -> ExplicitGroupoid:
    """Exactly one arrow between any two objects."""
    arrows = [Arrow(f"{a}>{b}", a, b) for a in objs for b in objs]
    table = {(f"{b}>{c}", f"{a}>{b}"): f"{a}>{c}" for a in objs for b in objs for c in objs}
    return ExplicitGroupoid(objs, arrows, table, {a: f"{a}>{a}" for a in objs}, name=name)


Z2 = cyclic(2, "z")
Z3 = cyclic(3, "t")
K2 = codiscrete(["p", "q"])
D2 = DiscreteGroupoid(["u", "v"], name="D2")
POINT = DiscreteGroupoid(["*"], name="1")


def to_point(G, target=POINT) -> Functor:
    return Functor(G, target, lambda a: "*", lambda f: ("id", "*"), name="!")


def z3_to_z3_square() -> Functor:
    # t ↦ 2t is an automorphism of Z3
    return Functor(Z3, Z3, lambda a: a, lambda f: Z3.arrow(f"t{(2 * int(f.name[1:])) % 3}"), name="sq")


def burnside_coend(alpha: Distributor, beta: Distributor, a, c) -> int:
    """Coend size by Burnside counting over one object per middle iso class."""
    B = alpha.target
    total = Fraction(0)
    for comp in B.components():
        b = comp[0]
        auts = B.automorphisms(b)
        fixed = 0
        for g in auts:
            ginv = B.inverse(g)
            xs = [x for x in alpha.at(a, b) if alpha.left(g, x) == x]
            ys = [y for y in beta.at(b, c) if beta.right(y, ginv) == y]
            fixed += len(xs) * len(ys)
        total += Fraction(fixed, len(auts))
    assert total.denominator == 1
    return int(total)


@pytest.mark.parametrize(
    "g",
    [Z2, Z3, K2, D2, SymGroupoid(Z2, 2), SymGroupoid(K2, 2), ProductGroupoid(Z2, K2),
     OppositeGroupoid(Z3), SumGroupoid(Z2, D2)],
    ids=lambda g: g.name,
)
def test_groupoids_validate(g):
    rep = validate_groupoid(g)
    assert rep.ok, rep


def test_sym_hom_counts():
    S = SymGroupoid(Z2, 3)
    # n! permutations times 2^n component choices
    assert [len(S.hom(("*",) * n, ("*",) * n)) for n in range(4)] == [1, 2, 8, 48]
    SK = SymGroupoid(K2, 2)
    assert len(SK.hom(("p", "q"), ("q", "q"))) == 2
    assert SK.hom(("p",), ("p", "p")) == ()


def test_sym_composition_convention():
    S = SymGroupoid(D2, 3)
    a = ("u", "v", "v")
    f = S.permutation(a, (1, 0, 2))
    g = S.permutation(f.cod, (2, 1, 0))
    gf = S.compose(g, f)
    assert gf.cod == tuple(a[gf.perm[i]] for i in range(3))
    assert gf.perm == tuple(f.perm[g.perm[i]] for i in range(3))


def test_identity_distributor_and_unitors():
    for G in (Z3, K2, SymGroupoid(Z2, 2)):
        ident = dist_identity(G)
        assert validate_distributor(ident).ok
        comp, lam = left_unitor(ident)
        pts = [(a, b) for a in G.objects() for b in G.objects()]
        assert check_class_map(lam, pts).ok
        comp, rho = right_unitor(ident)
        assert check_class_map(rho, pts).ok


def test_companion_conjoint_and_composites_validate():
    sq = z3_to_z3_square()
    assert validate_functor(sq).ok
    for d in (companion(sq), conjoint(sq), companion(to_point(K2)), conjoint(to_point(Z2))):
        assert validate_distributor(d).ok, d.name
    comp = dist_compose(companion(to_point(Z2)), conjoint(to_point(Z2)))
    assert validate_distributor(comp).ok
    # Z2 ↦ 1 ↦ Z2 through the point: one class per pair of arrows
    assert comp.count("*", "*") == 1
    back = dist_compose(conjoint(to_point(Z2)), companion(to_point(Z2)))
    assert back.count("*", "*") == 1
    # Z2 × Z2 / Z2 has two elements
    assert dist_compose(dist_identity(Z2), dist_identity(Z2)).count("*", "*") == 2


def test_coend_matches_burnside():
    cases = [
        (companion(z3_to_z3_square()), dist_identity(Z3)),
        (conjoint(to_point(Z2)), companion(to_point(Z2))),
        (companion(to_point(K2)), conjoint(to_point(K2))),
        (dist_identity(SymGroupoid(Z2, 2)), dist_identity(SymGroupoid(Z2, 2))),
    ]
    for alpha, beta in cases:
        comp = dist_compose(alpha, beta)
        for a in alpha.source.objects():
            for c in beta.target.objects():
                assert comp.count(a, c) == burnside_coend(alpha, beta, a, c)


def test_associator_is_class_bijection():
    sq = z3_to_z3_square()
    alpha, beta, gamma = companion(sq), conjoint(sq), dist_identity(Z3)
    rhs, lhs, nt = associator(alpha, beta, gamma)
    assert check_class_map(nt, [("*", "*")]).ok
    alpha, beta, gamma = conjoint(to_point(Z2)), companion(to_point(Z2)), conjoint(to_point(Z2))
    rhs, lhs, nt = associator(alpha, beta, gamma)
    assert check_class_map(nt, [("*", "*")]).ok
    assert rhs.count("*", "*") == lhs.count("*", "*") == 1


def test_find_natural_iso_detects_difference():
    sq = z3_to_z3_square()
    # companion of an automorphism vs identity: isomorphic as sets but not as bisets
    assert find_natural_iso(companion(sq), dist_identity(Z3)) is None
    m = find_natural_iso(companion(identity_functor(Z3)), dist_identity(Z3))
    assert m is not None
    nt = NatTransform(companion(identity_functor(Z3)), dist_identity(Z3),
                      lambda a, b, w: m[(a, b)][w])
    assert validate_nat(nt, iso=True).ok


def test_companion_composite_is_companion_of_composite():
    sq = z3_to_z3_square()
    sq2 = Functor(Z3, Z3, sq.on_obj, lambda f: sq.map(sq.map(f)), name="sq2")
    comp = dist_compose(companion(sq), companion(sq))
    assert find_natural_iso(comp, companion(sq2)) is not None
    assert find_natural_iso(comp, companion(sq)) is None


# -- promotion ---------------------------------------------------------------


def pair_bag(A, maxlen):
    """``α(a⃗, *) = Sym(A)[a⃗, ⟨x, x⟩]`` for a one-object A, trivial target."""
    S = SymGroupoid(A, maxlen)
    x = A.objects()[0]
    return Distributor(
        S, POINT,
        witnesses=lambda src, b: S.hom(src, (x, x)),
        left=lambda g, w: w,
        right=lambda w, f: S.compose(w, f),
        name="bag2",
    )


def generators(S, seq):
    """Adjacent swaps and single-component moves out of ``seq``: they generate every orbit."""
    base = S.base
    n = len(seq)
    out = []
    for k in range(n - 1):
        perm = list(range(n))
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        out.append(S.permutation(seq, perm))
    for k in range(n):
        for g in base.out_of(seq[k]):
            cod = seq[:k] + (base.cod(g),) + seq[k + 1:]
            comps = tuple(g if i == k else base.identity(seq[i]) for i in range(n))
            out.append(SymMor(tuple(range(n)), comps, seq, cod))
    return out


@functools.lru_cache(maxsize=None)
def brute_promotion_classes(alpha, src, tgt):
    """Unnormalized coend: arbitrary sub-sequences and global morphisms."""
    S = alpha.source
    base_objs = S.base.objects()
    p, n = len(src), len(tgt)
    elems = []
    for sizes in itertools.product(range(p + 1), repeat=n):
        if sum(sizes) != p:
            continue
        for seqs in itertools.product(*[list(itertools.product(base_objs, repeat=k)) for k in sizes]):
            options = [alpha.at(s, b) for s, b in zip(seqs, tgt)]
            concat = tuple(x for s in seqs for x in s)
            for parts in itertools.product(*options):
                for f in S.hom(concat, tuple(src)):
                    elems.append((seqs, parts, f))
    uf = UnionFind()
    index = set(elems)
    for e in elems:
        uf[e]
    for seqs, parts, f in elems:
        # (seqs', s_i, f) ~ (seqs, s_i·ρ_i, f ∘ ⊗ρ_i) for ρ_i : seqs_i → seqs'_i
        for rhos in moves(S, seqs):
            # build ⊗ρ : concat(seqs) → concat(seqs') as a Sym morphism
            perm, comps, off = [], [], 0
            for r in rhos:
                perm.extend(off + k for k in r.perm)
                comps.extend(r.comps)
                off += len(r.perm)
            new_seqs = tuple(r.cod for r in rhos)
            big = SymMor(tuple(perm), tuple(comps), tuple(x for s in seqs for x in s),
                         tuple(x for s in new_seqs for x in s))
            # inverse direction: (new_seqs, s_i·ρ_i⁻¹, f ∘ (⊗ρ)⁻¹) ~ (seqs, s_i, f)
            new_parts = tuple(alpha.right(s, S.inverse(r)) for s, r in zip(parts, rhos))
            other = (new_seqs, new_parts, S.compose(f, S.inverse(big)))
            assert other in index
            uf.union((seqs, parts, f), other)
    return uf, elems


def moves(S, seqs):
    """One generator in one block, identities elsewhere."""
    for i, s in enumerate(seqs):
        for g in generators(S, s):
            yield tuple(g if j == i else S.identity(t) for j, t in enumerate(seqs))


@functools.lru_cache(maxsize=None)
def bag4():
    return pair_bag(Z2, 4)


@pytest.mark.parametrize("src_len,tgt_len", [(0, 0), (0, 1), (1, 1), (2, 1), (2, 2), (3, 2), (4, 2)])
def test_promotion_normal_form_matches_brute_coend(src_len, tgt_len):
    alpha = bag4()
    prom = promotion_dagger(alpha, 4)
    src, tgt = ("*",) * src_len, ("*",) * tgt_len
    uf, elems = brute_promotion_classes(alpha, src, tgt)
    classes = {uf[e] for e in elems}
    normal = prom.at(src, tgt)
    assert len(normal) == len(classes)
    images = set()
    for w in normal:
        seqs = tuple(tuple(src[j] for j in blk) for blk in w.blocks)
        concat = [j for blk in w.blocks for j in blk]
        perm = tuple(concat.index(j) for j in range(len(src)))
        f = SymMor(perm, tuple(Z2.identity(x) for x in src), tuple(src[j] for j in concat), src)
        images.add(uf[(seqs, w.parts, f)])
    assert images == classes


def test_promotion_action_normalizes_like_brute_force():
    alpha = bag4()
    prom = promotion_dagger(alpha, 4)

    src, tgt = ("*",) * 4, ("*",) * 2
    uf, elems = brute_promotion_classes(alpha, src, tgt)
    S = alpha.source

    def embed(w):
        seqs = tuple(tuple(src[j] for j in blk) for blk in w.blocks)
        concat = [j for blk in w.blocks for j in blk]
        perm = tuple(concat.index(j) for j in range(len(src)))
        return (seqs, w.parts, SymMor(perm, tuple(Z2.identity(x) for x in src),
                                      tuple(src[j] for j in concat), src))

    homs = S.hom(src, src)
    for w in prom.at(src, tgt)[:6]:
        seqs, parts, f = embed(w)
        for h in homs[::7]:
            moved = prom.right(w, h)
            # brute-force action: post-compose the global morphism with h⁻¹
            assert uf[embed(moved)] == uf[(seqs, parts, S.compose(S.inverse(h), f))]


def test_promotion_distributor_validates():
    alpha = pair_bag(Z2, 3)
    prom = promotion_dagger(alpha, 2)
    pts = [(("*",) * p, ("*",) * n) for p in range(4) for n in range(3)]
    assert validate_distributor(prom, pts, max_checks=4000).ok


def test_theta_eta_mu():
    prom, ident, theta = theta_iso(Z2, 3)
    pts = [(a, b) for a in prom.source.objects() for b in prom.target.objects()]
    assert validate_nat(theta, pts, iso=True).ok

    alpha = pair_bag(Z2, 4)
    comp, eta = eta_iso(alpha, 2)
    pts = [(("*",) * p, "*") for p in range(4)]
    assert validate_nat(eta, pts, iso=True).ok

    beta = dereliction_i(POINT, 4)
    lhs, rhs, mu = mu_iso(alpha, beta, 4)
    pts = [(("*",) * p, ("*",) * n) for p in range(4) for n in range(3)] + [(("*",) * 4, ("*",))]
    assert check_class_map(mu, pts).ok


def test_esp_composition_with_dereliction_is_identity():
    alpha = pair_bag(Z2, 4)
    comp = esp_compose(dereliction_i(Z2, 4), alpha, 4)
    pts = [(("*",) * p, "*") for p in range(4)]
    m = find_natural_iso(comp, alpha, pts)
    assert m is not None


def test_species_companion_only_length_one():
    sq = z3_to_z3_square()
    d = companion_species(sq, 2)
    assert d.at((), "*") == ()
    assert len(d.at(("*",), "*")) == 3
    assert d.at(("*", "*"), "*") == ()
    assert validate_distributor(d, [(s, "*") for s in d.source.objects()]).ok


# -- restrictions and adjunctions ----------------------------------------------


def k2_point_adjunction():
    L = to_point(K2)
    R = Functor(POINT, K2, lambda _: "p", lambda _: K2.identity("p"), name="R")
    unit = lambda a: K2.hom(a, "p")[0]
    counit = lambda _: ("id", "*")
    return L, R, unit, counit


def test_equivalence_check_accepts_and_rejects():
    L, R, unit, counit = k2_point_adjunction()
    assert groupoid_equivalence_check(L, R, unit, counit).ok
    Lz = to_point(Z2)
    Rz = Functor(POINT, Z2, lambda _: "*", lambda _: Z2.identity("*"), name="R")
    rep = groupoid_equivalence_check(Lz, Rz, lambda a: Z2.identity(a), lambda _: ("id", "*"))
    assert not rep.ok and "fully faithful" in str(rep)
    rep = groupoid_equivalence_check(L, R, lambda a: None, counit)
    assert not rep.ok and "unit component" in str(rep)


def test_restriction_and_xi():
    L, R, unit, counit = k2_point_adjunction()
    alpha = dist_identity(K2)
    beta = dist_identity(POINT)
    assert validate_distributor(restrict_left(beta, L)).ok
    lhs, rhs, xi, xi_inv = xi_iso(alpha, beta, L, R, unit, counit)
    pts = [(a, "*") for a in K2.objects()]
    assert check_class_map(xi, pts).ok
    assert check_class_map(xi_inv, pts).ok
    for a, c in pts:
        for w in lhs.at(a, c):
            assert xi_inv(a, c, xi(a, c, w)) == w


# -- properties ----------------------------------------------------------------


GROUPS = [Z2, Z3, K2]


@st.composite
def functor_chains(draw):
    """Composable companions/conjoints into and out of the point."""
    G = draw(st.sampled_from(GROUPS))
    kind = draw(st.sampled_from(["cc", "jc", "cj"]))
    F = to_point(G)
    if kind == "cc":
        return companion(F), dist_identity(POINT)
    if kind == "jc":
        return conjoint(F), companion(F)
    return companion(F), conjoint(F)


@settings(max_examples=25, deadline=None)
@given(functor_chains())
def test_coend_count_equals_burnside(pair):
    alpha, beta = pair
    comp = dist_compose(alpha, beta)
    assert validate_distributor(comp).ok
    for a in alpha.source.objects():
        for c in beta.target.objects():
            assert comp.count(a, c) == burnside_coend(alpha, beta, a, c)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 3), st.integers(0, 2))
def test_promotion_normal_forms_are_unique(p, n):
    alpha = pair_bag(Z2, 3)
    prom = promotion_dagger(alpha, 2)
    src, tgt = ("*",) * p, ("*",) * n
    ws = prom.at(src, tgt)
    for w in ws:
        assert all(list(b) == sorted(b) for b in w.blocks)
        assert sorted(j for b in w.blocks for j in b) == list(range(p))
        ident = prom.source.identity(src)
        assert prom.right(w, ident) == w
