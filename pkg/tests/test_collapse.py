from __future__ import annotations

import random
from pathlib import Path

import pytest

from gamecollapse.collapse import (
    all_points,
    arrow_functors,
    bang_functors,
    collapse_iso,
    collapse_kleisli,
    collapse_strategy,
    config_groupoid,
    kleisli_pcomp,
    pcomp,
    pcomp_report,
    pder,
    pid,
    pprom,
    projection_species,
    seely_functors,
    unit_triangle,
    with_functors,
)
from gamecollapse.dist import (
    check_class_map,
    find_natural_iso,
    validate_distributor,
    validate_nat,
)
from gamecollapse.es import EventStructure
from gamecollapse.games import bang, bool_board, empty_board, hom, o_board, qa_board, tensor
from gamecollapse.randgen import random_composable, random_strategies
from gamecollapse.strategies import (
    Strategy,
    compose,
    copycat,
    dereliction,
    iso_check,
    parse_strategy,
    tensor_strategies,
)
from gamecollapse.symmetry import SymBijection
from gamecollapse.util import ValidationError

DATA = Path(__file__).resolve().parent.parent / "data"
GAMES = [o_board(), bool_board(), qa_board(), bang(o_board(), 2), bang(bool_board(), 2)]


def load(name: str, label: str) -> Strategy:
    return parse_strategy((DATA / name).read_text(), label, DATA)


def negation() -> Strategy:
    b = bool_board()
    evs = {"q": "-", "ask": "+", "t": "-", "f": "-", "rt": "+", "rf": "+"}
    es = EventStructure.build(evs, [("q", "ask"), ("ask", "t"), ("ask", "f"), ("t", "rf"), ("f", "rt")],
                              [("t", "f")], evs)
    disp = {"q": (1, 0), "ask": (0, 0), "t": (0, 1), "f": (0, 2), "rt": (1, 1), "rf": (1, 2)}
    return Strategy(es, hom(b, b), disp, name="not")


def points_of(d):
    return [(a, b) for a in d.source.objects() for b in d.target.objects()]


# -- witnesses and actions -----------------------------------------------------------------


@pytest.mark.parametrize("game", GAMES, ids=lambda g: g.name)
def test_copycat_witnesses_match_symmetries(game):
    d = collapse_strategy(copycat(game))
    for x, y in points_of(d):
        assert d.count(x, y) == len(game.tilde.between(x, y))


@pytest.mark.parametrize("game", GAMES, ids=lambda g: g.name)
def test_collapse_is_a_distributor(game):
    assert validate_distributor(collapse_strategy(copycat(game))).ok
    assert validate_distributor(collapse_strategy(copycat(game), complete=True)).ok


def test_identity_action_is_trivial():
    d = collapse_strategy(copycat(bang(o_board(), 2)))
    for a, b in all_points(d):
        for w in d.at(a, b):
            assert d.left(SymBijection.identity(b), w) == w
            assert d.right(w, SymBijection.identity(a)) == w


def test_swap_action_on_two_copies():
    game = bang(o_board(), 2)
    d = collapse_strategy(copycat(game))
    full = frozenset({(0, 0), (1, 0)})
    swap = SymBijection(frozenset({((0, 0), (1, 0)), ((1, 0), (0, 0))}))
    ws = d.at(full, full)
    assert len(ws) == 2
    # the swap acts freely on the two witnesses, from either side
    assert {d.left(swap, w) for w in ws} == set(ws)
    assert all(d.left(swap, w) != w for w in ws)
    _, _, fwd, _ = pid(game)
    for w in ws:
        moved = d.left(swap, d.right(w, swap))
        assert fwd(full, full, moved) == swap.then(fwd(full, full, w)).then(swap)


def test_boolean_collapse_is_the_relation():
    d = collapse_strategy(negation())
    rel = {(tuple(sorted(a)), tuple(sorted(b))): d.count(a, b) for a, b in all_points(d)}
    assert rel == {((), ()): 1, ((0, 1), (0, 2)): 1, ((0, 2), (0, 1)): 1, ((0,), (0,)): 1}


def test_strategy_collapses_are_distributors():
    for s in (negation(), load("fig1-sigma.es", "σ"), load("and.es", "and")):
        assert validate_distributor(collapse_strategy(s)).ok


def test_collapse_of_tensor_counts_multiply():
    n, cc = negation(), copycat(bool_board())
    t = tensor_strategies(n, cc)
    dt, dn, dc = collapse_strategy(t), collapse_strategy(n), collapse_strategy(cc)

    def tag(x, y):
        return frozenset((0, e) for e in x) | frozenset((1, e) for e in y)

    for (a1, b1) in points_of(dn):
        for (a2, b2) in points_of(dc):
            assert dt.count(tag(a1, a2), tag(b1, b2)) == dn.count(a1, b1) * dc.count(a2, b2)
    assert tensor(bool_board(), bool_board()).name == t.left.name


# -- pcomp ------------------------------------------------------------------------------------


def test_figure_pcomp_is_not_surjective():
    sigma, tau = load("fig1-sigma.es", "σ"), load("fig1-tau.es", "τ")
    dc, both, nt = pcomp(sigma, tau)
    point = (frozenset(), frozenset({0, 1}))
    assert dc.count(*point) == 0
    assert both.count(*point) == 1
    rep = pcomp_report(sigma, tau)
    assert rep.report.ok and rep.injective and not rep.surjective


def test_pcomp_bijective_on_visible_winning_pairs():
    rng = random.Random(21)
    for _ in range(25):
        s, t = random_composable(rng, visible=True, winning=True, bang_prob=0.5)
        rep = pcomp_report(s, t, complete=True)
        assert rep.report.ok and rep.bijective


def test_pcomp_injective_on_thin_pairs():
    rng = random.Random(22)
    for _ in range(25):
        s, t = random_composable(rng, visible=False, winning=False, bang_prob=0.5)
        rep = pcomp_report(s, t)
        assert rep.report.ok and rep.injective


def test_pcomp_rejects_incomplete_middle():
    q = qa_board()
    silent = Strategy(EventStructure.build([]), hom(empty_board(), q), {}, name="silent")
    es = EventStructure.build(["q", "a"], [("q", "a")], (), {"q": "-", "a": "+"})
    # answers on the right without ever asking on the left
    eager = Strategy(es, hom(q, q), {"q": (1, 0), "a": (1, 1)}, name="eager")
    dc, both, nt = pcomp(silent, eager, complete=True)
    point = (frozenset(), frozenset({0, 1}))
    (w,) = dc.at(*point)
    with pytest.raises(ValidationError):
        nt(*point, w)


def test_associativity_classes_on_random_triples():
    from gamecollapse.dist import associator

    rng = random.Random(4)
    for _ in range(5):
        s, t = random_composable(rng, visible=True, winning=True)
        u = copycat(t.right)
        right_side, left_side, nt = associator(collapse_strategy(s), collapse_strategy(t), collapse_strategy(u))
        pts = [p for p in points_of(right_side) if right_side.count(*p)]
        assert check_class_map(nt, pts).ok


# -- unitor and triangle -------------------------------------------------------------------------


@pytest.mark.parametrize("game", GAMES, ids=lambda g: g.name)
def test_pid_round_trips(game):
    d, ident, fwd, bwd = pid(game)
    assert validate_nat(fwd, iso=True).ok and validate_nat(bwd, iso=True).ok
    for a, b in all_points(d):
        for w in d.at(a, b):
            assert bwd(a, b, fwd(a, b, w)) == w
        for th in ident.at(a, b):
            assert fwd(a, b, bwd(a, b, th)) == th


def test_unit_triangle_on_examples():
    for s in (negation(), load("and.es", "and"), copycat(bang(o_board(), 2))):
        assert unit_triangle(s).ok
        assert unit_triangle(s, complete=True).ok


def test_unit_triangle_on_random_strategies():
    rng = random.Random(8)
    for s in random_strategies(rng, 10, winning=True, bang=True):
        assert unit_triangle(s).ok


def test_collapse_of_isomorphism_is_natural():
    n = negation()
    comp = compose(copycat(bool_board()), n)
    f = iso_check(comp, n)
    dcomp, dn = collapse_strategy(comp), collapse_strategy(n)
    assert validate_nat(collapse_iso(f, dcomp, dn), iso=True).ok


# -- the exponential ---------------------------------------------------------------------------------


@pytest.mark.parametrize("game,width", [(o_board(), 3), (bool_board(), 2), (bool_board(), 3), (qa_board(), 3)],
                         ids=lambda v: getattr(v, "name", str(v)))
def test_bang_equivalence(game, width):
    assert bang_functors(game, width).check().ok


def test_bang_equivalence_fails_on_the_empty_board():
    rep = bang_functors(empty_board(), 2).check()
    assert not rep.ok
    eq = bang_functors(empty_board(), 2)
    assert len(eq.L.source.objects()) == 3 and len(eq.L.target.objects()) == 1


def test_with_arrow_and_seely_equivalences():
    b, q = bool_board(), qa_board()
    assert with_functors(b, q).check().ok
    assert arrow_functors(b, q, 2).check().ok
    assert seely_functors(config_groupoid(b, True), config_groupoid(q, True), 3).check().ok


def test_dereliction_collapses_to_the_species_unit():
    d, ider, nt = pder(bool_board(), 2)
    assert validate_nat(nt, points_of(d), iso=True).ok


def test_promotion_preservator():
    lhs, dag, nt = pprom(load("and.es", "and"), 2)
    pts = [(s, t) for s in lhs.source.objects() for t in dag.target.objects() if len(s) <= 2]
    assert validate_nat(nt, pts, iso=True).ok


def test_kleisli_compositor_with_dereliction():
    b = bool_board()
    conj = load("and.es", "and")
    lhs, rhs, nt = kleisli_pcomp(dereliction(b, 1), conj, 2)
    pts = points_of(lhs)
    assert check_class_map(nt, pts).ok
    # identity law at the level of counts: der then and is and
    k = collapse_kleisli(conj)
    for s, c in pts:
        if len(s) <= 2:
            assert lhs.count(s, c) == k.count(s, c)


def test_projection_is_a_conjoint():
    k, conj = projection_species(bool_board(), o_board(), 0, 2)
    assert find_natural_iso(k, conj, points_of(k)) is not None
