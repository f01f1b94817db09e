from __future__ import annotations

from hypothesis import given, settings, strategies as st

from gamecollapse.es import EsMap, EventStructure
from gamecollapse.games import bang, game_from_es, o_board, tensor, bool_board, hom
from gamecollapse.symmetry import (
    IsoFamily,
    SymBijection,
    Tcg,
    close_family,
    factorize,
    factorize_all,
    natural_equiv,
    sym_compose,
    sym_invert,
    validate_iso_family,
    validate_tcg,
)

S = SymBijection.of


def _fork_game():
    """A question with two concurrent answers that may be swapped positively."""
    es = EventStructure.build("qab", [("q", "a"), ("q", "b")], polarity={"q": "-", "a": "+", "b": "+"})
    swap = S({"q": "q", "a": "b", "b": "a"})
    fam = close_family(es, [swap])
    ids = IsoFamily.identities(es)
    return game_from_es(es, lambda x: 0, name="fork", tilde=fam, neg=ids, pos=fam)


def test_identity_families_are_valid():
    es = EventStructure.build("ab", [("a", "b")])
    assert validate_iso_family(IsoFamily.identities(es)).ok
    assert validate_tcg(Tcg.trivial(es)).ok


def test_missing_restriction_detected():
    es = EventStructure.build("ab", polarity={"a": "-", "b": "-"})
    swap = S({"a": "b", "b": "a"})
    fam = IsoFamily(es, bijections=[swap] + [SymBijection.identity(x) for x in es.configurations()])
    rep = validate_iso_family(fam)
    assert any("missing restriction" in v for v in rep.violations)
    assert validate_iso_family(close_family(es, [swap])).ok


def test_bang_of_one_move_is_a_tcg():
    g = bang(o_board(), 2)
    assert validate_iso_family(g.tilde.materialize()).ok
    assert validate_tcg(g.tcg).ok


def test_copy_swap_cannot_be_positive():
    g = bang(o_board(), 2)
    swap = S({(0, 0): (1, 0), (1, 0): (0, 0)})
    bad_pos = close_family(g.es, [swap], name="pos")
    rep = validate_tcg(Tcg(g.es, g.tilde, g.neg, bad_pos))
    assert any("both positive and negative" in v for v in rep.violations)


def test_factorize_identity_and_copy_swap():
    g = bang(o_board(), 2)
    x = frozenset({(0, 0), (1, 0)})
    ident = SymBijection.identity(x)
    assert factorize(g.tcg, ident) == (ident, ident)
    swap = S({(0, 0): (1, 0), (1, 0): (0, 0)})
    assert factorize(g.tcg, swap) == (swap, ident)


def test_factorize_recovers_both_parts():
    g = bang(_fork_game(), 2)
    assert validate_tcg(g.tcg).ok
    reindex = S({(i, e): (1 - i, e) for i in (0, 1) for e in "qab"})
    local = S({(0, "q"): (0, "q"), (0, "a"): (0, "b"), (0, "b"): (0, "a"),
               (1, "q"): (1, "q"), (1, "a"): (1, "a"), (1, "b"): (1, "b")})
    assert reindex in g.neg and local in g.pos
    th = reindex.then(local)
    assert factorize_all(g.tcg, th) == [(reindex, local)]


def test_groupoid_operations():
    g = bang(o_board(), 2)
    swap = S({(0, 0): (1, 0), (1, 0): (0, 0)})
    x = swap.dom
    assert sym_compose(g.tilde, sym_invert(g.tilde, swap), swap) == SymBijection.identity(x)
    assert SymBijection.identity(x).then(swap) == swap


def test_restriction_commutes_with_composition():
    g = bang(_fork_game(), 2)
    fam = g.tilde.materialize()
    by_dom = {}
    for th in fam:
        by_dom.setdefault(th.dom, []).append(th)
    checked = 0
    for th in fam:
        for t2 in by_dom.get(th.cod, ()):
            comp = th.then(t2)
            for sub in g.es.configurations():
                if sub <= th.dom and th.restrict(sub).cod in set(g.es.configurations()):
                    r1 = th.restrict(sub)
                    assert comp.restrict(sub) == r1.then(t2.restrict(r1.cod))
                    checked += 1
    assert checked > 100


def test_family_groupoid_laws_extensionally():
    g = bang(_fork_game(), 2)
    fam = g.tilde.materialize()
    members = fam.all()
    by_dom = {}
    for th in members:
        by_dom.setdefault(th.dom, []).append(th)
    for a in members:
        assert SymBijection.identity(a.dom).then(a) == a == a.then(SymBijection.identity(a.cod))
        for b in by_dom.get(a.cod, ()):
            for c in by_dom.get(b.cod, ())[:3]:
                assert a.then(b).then(c) == a.then(b.then(c))


def test_natural_equivalence():
    g = bang(o_board(), 2)
    one = EventStructure.build(["s"], polarity={"s": "-"})
    f = EsMap(one, g.es, {"s": (0, 0)})
    h = EsMap(one, g.es, {"s": (1, 0)})
    assert natural_equiv(f, f, g.tilde, g.pos) == "~+"
    assert natural_equiv(f, h, g.tilde, g.pos) == "~"
    b = bool_board()
    two = EventStructure.build(["s", "t"], [("s", "t")])
    m1 = EsMap(two, b.es, {"s": 0, "t": 1})
    m2 = EsMap(two, b.es, {"s": 0, "t": 2})
    assert natural_equiv(m1, m2, b.tilde, b.pos) == "none"


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["o", "fork"]), st.integers(1, 3))
def test_factorization_round_trip_and_uniqueness(base, width):
    a = o_board() if base == "o" else _fork_game()
    g = bang(a, min(width, 2) if base == "fork" else width)
    for th in g.tilde:
        found = factorize_all(g.tcg, th)
        assert len(found) == 1
        neg, pos = found[0]
        assert neg.then(pos) == th


def test_constructed_tcgs_validate():
    for g in (tensor(bool_board(), o_board()), hom(bang(o_board(), 2), bool_board())):
        assert validate_tcg(g.tcg).ok
