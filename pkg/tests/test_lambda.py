from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from gamecollapse.dist import SymGroupoid, SymMor
from gamecollapse.es import ParseError
from gamecollapse.lam import itypes as T
from gamecollapse.lam.correspond import beta_invariance, correspond, ctx_symmetry
from gamecollapse.lam.derivations import (
    Abs,
    Ap,
    Ax,
    DerivationError,
    Moves,
    check_derivation,
    classes_orbits,
    classes_union_find,
    ctx_identity,
    enumerate_derivations,
    free_enumeration,
    itd,
    left,
    parse_point,
    right,
    show_point,
)
from gamecollapse.lam.interp import game_witnesses, interpret, point_configs
from gamecollapse.lam.laws import action_laws, class_action_suite, order_suite, random_derivation
from gamecollapse.lam.terms import App, Lam, Var, alpha_equal, head_normal_form, normal_form, parse_term, show, subst
from gamecollapse.lam.universal import (
    DStar,
    equivalence_check,
    required_truncation,
    to_config,
    to_mor,
    to_symmetry,
    to_type,
    u_event,
    u_game,
)
from gamecollapse.strategies import dereliction, iso_check, validate_strategy
from gamecollapse.util import Report, TruncationError

P = T.parse_type
XX_POINT = "((*,*)-o*,*,*);*"


# -- terms -------------------------------------------------------------------------------------


@st.composite
def terms(draw, depth: int = 3, scope: tuple = ("x", "y")):
    if depth == 0 or draw(st.integers(0, 2)) == 0:
        return Var(draw(st.sampled_from(scope)))
    if draw(st.booleans()):
        name = draw(st.sampled_from(["x", "y", "z"]))
        return Lam(name, draw(terms(depth - 1, tuple(sorted(set(scope) | {name})))))
    return App(draw(terms(depth - 1, scope)), draw(terms(depth - 1, scope)))


def test_parse_examples():
    assert parse_term("\\x. x") == Lam("x", Var("x"))
    assert parse_term("λx y. x") == Lam("x", Lam("y", Var("x")))
    assert parse_term("x x", free=["x"]) == App(Var("x"), Var("x"))
    assert parse_term("f \\x. x y", free=["f", "y"]) == App(Var("f"), Lam("x", App(Var("x"), Var("y"))))


@pytest.mark.parametrize("text", ["x y", "\\x.", "(x", "x)", "\\. x", "x $"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text, free=["x"])


@given(terms())
def test_show_parse_round_trip(t):
    assert parse_term(show(t)) == t


def test_substitution_avoids_capture():
    t = subst(parse_term("\\y. x y"), "x", Var("y"))
    assert alpha_equal(t, parse_term("\\z. y z"))
    assert not alpha_equal(t, parse_term("\\y. y y"))


def test_reduction():
    assert normal_form(parse_term("(\\f x. f (f x)) (\\y. y) z")) == Var("z")
    omega = parse_term("(\\x. x x) (\\x. x x)")
    assert head_normal_form(omega, fuel=50) is None
    assert normal_form(parse_term("(\\x y. y) ((\\x. x x) (\\x. x x))")) == Lam("y", Var("y"))


# -- types and morphisms ---------------------------------------------------------------------


@pytest.mark.parametrize("text", ["*", "()-o*", "(*,*)-o*", "((*)-o*,*)-o()-o*", "(*)⊸(*)⊸*"])
def test_type_round_trip(text):
    a = P(text)
    assert P(T.show_type(a)) == a


def test_type_parse_errors():
    for bad in ["(*", "*-o*", "(*,)-o*", "x"]:
        with pytest.raises(ParseError):
            P(bad)


def test_identity_and_e_relations():
    f = T.hom(P("(*,*)-o*"), P("(*,*)-o*"))[1]
    assert T.compose(T.identity(f.cod), f) == f
    assert T.compose(f, T.identity(f.dom)) == f
    assert T.compose(T.E_INV, T.E) == T.ID_STAR
    assert T.compose(T.E, T.E_INV) == T.identity(P("()-o*"))
    # the word is read right to left: word[0] acts first
    assert T.normalize([T.E, T.E_INV, T.E, T.E_INV]) == T.ID_STAR
    assert T.normalize([T.E_INV, T.E, T.E_INV]) == T.E_INV
    with pytest.raises(T.MorphismError):
        T.compose(T.E_INV, T.E, star=False)
    with pytest.raises(T.MorphismError):
        T.compose(f, T.E)


def test_hom_counts():
    assert len(T.hom(P("(*,*)-o*"), P("(*,*)-o*"))) == 2
    assert len(T.hom(P("(*,*,*)-o*"), P("(*,*,*)-o*"))) == 6
    assert len(T.hom(P("*"), P("()-o*"))) == 1
    assert not T.hom(P("*"), P("()-o*"), star=False)
    assert T.isomorphic(P("(*,()-o*)-o*"), P("(()-o*,*)-o*"))
    assert not T.isomorphic(P("(*)-o*"), P("*"))


def _seq_as_sym(s: T.SeqMor) -> SymMor:
    return SymMor(s.perm, s.comps, s.dom, s.cod)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_sequence_composition_matches_sym(data):
    seq = (P("(*,*)-o*"), P("*"), P("()-o*"))
    base = DStar({b for a in seq for b in [a, T.STAR, P("()-o*")]})
    sym = SymGroupoid(base, 3)
    homs = T.seq_hom(seq, seq)
    f, g = data.draw(st.sampled_from(homs)), data.draw(st.sampled_from(homs))
    assert _seq_as_sym(T.seq_compose(g, f)) == sym.compose(_seq_as_sym(g), _seq_as_sym(f))
    assert T.seq_compose(T.seq_inverse(f), f) == T.seq_identity(seq)


@given(st.sampled_from(["(*,*)-o*", "((*)-o*,*)-o()-o*", "(()-o*,*)-o*", "((*,*)-o*)-o(*)-o*"]), st.data())
def test_groupoid_laws_on_types(text, data):
    a = P(text)
    autos = T.automorphisms(a)
    f, g, h = (data.draw(st.sampled_from(autos)) for _ in range(3))
    assert T.compose(h, T.compose(g, f)) == T.compose(T.compose(h, g), f)
    assert T.compose(T.inverse(f), f) == T.identity(a)
    T.check(f)


# -- derivations ------------------------------------------------------------------------------


def test_single_variable_axiom():
    ds = enumerate_derivations("x", ["x"], ((T.STAR,),), T.STAR)
    assert ds == (Ax(((T.STAR,),), T.STAR, 0, T.ID_STAR),)
    assert itd("x", ["x"], ((T.STAR,),), T.STAR).count == 1


def test_identity_abstraction():
    assert itd("\\x. x", [], (), P("(*)-o*")).count == 1


def test_xx_derivations_and_classes():
    ctx, typ = parse_point(XX_POINT)
    ds = enumerate_derivations("x x", ["x"], ctx, typ)
    assert len(ds) == 8
    node = ("a", ("v", 0), ("v", 0))
    for d in ds:
        check_derivation(d, node)
        assert isinstance(d, Ap) and isinstance(d.fun, Ax)
    dist = itd("x x", ["x"], ctx, typ)
    assert dist.count == 2
    # swapping the two argument copies in the context exchanges the classes
    swap = T.SeqMor((0, 2, 1), tuple(T.identity(a) for a in (ctx[0][0], T.STAR, T.STAR)), ctx[0], ctx[0])
    assert dist.act((swap,), T.ID_STAR, 0) == 1


def test_malformed_derivations_rejected():
    ctx = ((T.STAR,),)
    with pytest.raises(DerivationError):
        check_derivation(Ax(ctx, T.STAR, 0, T.E))
    with pytest.raises(DerivationError):
        check_derivation(Abs((), P("(*)-o*"), Ax(((T.STAR, T.STAR),), T.STAR, 0, T.ID_STAR), T.identity(P("(*)-o*"))))
    with pytest.raises(DerivationError):
        right(Ax(ctx, T.STAR, 0, T.ID_STAR), ctx_identity(((P("()-o*"),),)))
    with pytest.raises(DerivationError):
        left(T.E_INV, Ax(ctx, T.STAR, 0, T.ID_STAR))


def test_enumeration_requires_context():
    with pytest.raises(ValueError):
        enumerate_derivations("x y", ["x"], ((T.STAR,),), T.STAR)


def test_unused_variable_has_no_derivation():
    assert itd("\\x y. x", [], (), P("(*)-o(*)-o*")).count == 0
    assert itd("\\x y. x", [], (), P("(*)-o()-o*")).count == 1


@pytest.mark.parametrize("term,names,point,universe", [
    ("x x", ["x"], XX_POINT, ["*", "()-o*", "(*,*)-o*", "(*,()-o*)-o*"]),
    ("x y", ["x", "y"], "((*,()-o*)-o*);(*,()-o*);*", ["*", "()-o*", "(*,()-o*)-o*", "(()-o*,*)-o*", "(*,*)-o*"]),
])
def test_canonical_enumeration_matches_free_oracle(term, names, point, universe):
    ctx, typ = parse_point(point)
    uni = tuple(P(u) for u in universe)
    free = free_enumeration(term, names, ctx, typ, uni)
    assert len(free) > len(enumerate_derivations(term, names, ctx, typ))
    assert len(classes_union_find(free, Moves(True, uni))) == itd(term, names, ctx, typ).count


def test_saturation_strategies_agree():
    assert order_suite(seed=3).ok
    ctx, typ = parse_point("((*,*)-o()-o*);(*,*);*")
    ds = enumerate_derivations("x y y", ["x", "y"], ctx, typ)
    assert classes_union_find(ds) == classes_orbits(ds)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_action_laws_on_random_derivations(seed):
    rng = random.Random(seed)
    report = Report("laws")
    action_laws(random_derivation(rng), rng, report)
    assert report.ok, str(report)


def test_point_automorphisms_act_on_classes():
    assert class_action_suite().ok


# -- the universal arena ------------------------------------------------------------------------


def test_empty_arguments_collapse():
    assert to_config(P("()-o*"), 1, 2) == to_config(T.STAR, 1, 2)
    assert to_config(P("(*)-o()-o*"), 1, 2) == to_config(P("(*)-o*"), 1, 2)
    assert to_type(to_config(P("()-o(*)-o*"), 1, 2)) == P("()-o(*)-o*")


def test_xx_point_configuration_follows_ranks():
    ctx, typ = parse_point(XX_POINT)
    xa, xb = point_configs(ctx, typ, 2, 3)
    assert xb == {u_event((), 2)}
    copies = {(j, e) for j, e in xa}
    expected = {(0, u_event((), 2)), (0, u_event(((0, 0),), 2)), (0, u_event(((0, 1),), 2)),
                (1, u_event((), 2)), (2, u_event((), 2))}
    assert copies == expected


def test_truncation_errors():
    with pytest.raises(TruncationError):
        to_config(P("((*)-o*)-o*"), 1, 2)
    with pytest.raises(TruncationError):
        to_config(P("(*,*,*)-o*"), 2, 2)
    with pytest.raises(TruncationError):
        game_witnesses("x x", ["x"], *parse_point(XX_POINT), 2, 2)
    assert required_truncation(*parse_point(XX_POINT)) == (2, 3)


@pytest.mark.parametrize("text", ["*", "(*)-o*", "(*,*)-o*", "((*,*)-o*,*,*)-o*", "(*)-o(*,*)-o*", "(()-o*,*)-o*"])
def test_round_trip_through_u(text):
    a = P(text)
    x = to_config(a, 2, 3)
    assert to_config(to_type(x), 2, 3) == x
    assert T.isomorphic(to_type(x), a)


def test_translation_preserves_composition():
    a = P("((*,*)-o*,*,*)-o*")
    autos = T.automorphisms(a)
    for f in autos:
        assert to_mor(to_symmetry(f, 2)) == f
        assert to_symmetry(T.inverse(f), 2) == to_symmetry(f, 2).inverse()
        for g in autos:
            assert to_symmetry(T.compose(g, f), 2) == to_symmetry(f, 2).then(to_symmetry(g, 2))


def test_adjoint_equivalence():
    types = [P(t) for t in ["*", "()-o*", "(*)-o*", "(*,*)-o*", "(*)-o()-o*", "((*)-o*,*)-o*", "(()-o*)-o*"]]
    extra = [frozenset(u_event(p, 2) for p in [(), ((0, 1),), ((0, 2),), ((0, 2), (0, 0))])]
    assert equivalence_check(types, 2, 3, extra).ok


# -- interpretation and correspondence ---------------------------------------------------------


@pytest.mark.parametrize("level,width", [(1, 1), (1, 2), (2, 1)])
def test_variable_is_dereliction(level, width):
    s = interpret("x", ["x"], level, width)
    assert validate_strategy(s).ok
    assert iso_check(s, dereliction(u_game(level, width), width)) is not None


def test_xx_game_side():
    side = game_witnesses("x x", ["x"], *parse_point(XX_POINT), 2, 3)
    assert len({w.config for w in side.witnesses}) == 1
    assert side.count == 2
    # pruning to the point's shapes drops Opponent moves, so only the full strategy is receptive
    assert not validate_strategy(side.strategy).ok
    full = game_witnesses("x x", ["x"], *parse_point(XX_POINT), 2, 3, prune=False)
    assert full.count == 2 and len(full.strategy.es) > len(side.strategy.es)


def test_context_symmetry_is_a_symmetry_of_the_context():
    ctx, typ = parse_point(XX_POINT)
    xa, _ = point_configs(ctx, typ, 2, 3)
    side = game_witnesses("x x", ["x"], ctx, typ, 2, 3)
    for theta in itd("x x", ["x"], ctx, typ).point_automorphisms():
        sym = ctx_symmetry(theta[0], 2)
        assert sym.dom == xa and sym.cod == xa
        assert sym in side.collapsed.A.tilde


@pytest.mark.parametrize("term,names,point,count", [
    ("x x", ["x"], XX_POINT, 2),
    ("\\x. x", [], "(*)-o*", 1),
    ("\\x. x", [], "((*)-o*)-o(*)-o*", 1),
    ("\\x y. x", [], "(*)-o()-o*", 1),
    ("\\x y. x", [], "(*)-o(*)-o*", 0),
    ("x y", ["x", "y"], "((*,*)-o*);(*,*);*", 2),
    ("x (x y)", ["x", "y"], "((*)-o*,(*)-o*);(*);*", 2),
    ("\\f x. f (f x)", [], "((*)-o*,(*)-o*)-o(*)-o*", 2),
    ("y", ["y"], "((*,*)-o*);(*,*)-o*", 2),
])
def test_correspondence(term, names, point, count):
    c = correspond(term, names, point)
    assert c.ok, str(c.report)
    assert c.derivations.count == c.game.count == c.bigger.count == count
    assert c.bijection is not None and len(c.bijection) == count


@pytest.mark.parametrize("redex,reduct,point", [
    ("(\\x. x) y", "y", "(*);*"),
    ("(\\x. x x) y", "y y", XX_POINT),
])
def test_beta_pairs_have_equal_counts(redex, reduct, point):
    ctx, typ = parse_point(point)
    names = ["y"]
    assert beta_invariance(redex, names, ctx, typ).ok
    a = correspond(redex, names, point, equivariant=False)
    b = correspond(reduct, names, point, equivariant=False)
    assert a.game.count == b.game.count and a.derivations.count == b.derivations.count


def test_beta_with_erased_argument_type_needs_widening():
    ctx, typ = parse_point("(*);*")
    term = "(\\f x. f (f x)) (\\y. y) z"
    assert itd(term, ["z"], ctx, typ, max_args=2).count == 0
    assert itd(term, ["z"], ctx, typ, max_args=2, widen=1).count == 1
    assert game_witnesses(term, ["z"], ctx, typ, 1, 1).count == 1


def test_eta_pair_has_equal_counts():
    a = correspond("\\z. y z", ["y"], "((*,*)-o*);(*,*)-o*")
    b = correspond("y", ["y"], "((*,*)-o*);(*,*)-o*")
    assert a.ok and b.ok and a.game.count == b.game.count == 2


def test_show_point_round_trip():
    ctx, typ = parse_point(XX_POINT)
    assert parse_point(show_point(ctx, typ)) == (ctx, typ)
