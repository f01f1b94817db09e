from __future__ import annotations

import itertools

import pytest

from gamecollapse.es import EventStructure, ParseError
from gamecollapse.games import (
    PAR_TABLE,
    TENSOR_TABLE,
    arrow,
    bang,
    bool_board,
    complete_configs,
    dual,
    empty_board,
    game_from_es,
    hom,
    inj,
    lolli,
    lolli_config,
    o_board,
    p_par,
    p_tensor,
    pair_config,
    par,
    parse_game,
    parse_game_expr,
    split,
    tensor,
    validate_arena,
    validate_board,
    with_product,
)
from gamecollapse.util import ValidationError


def test_payoff_tables_cell_by_cell():
    expected_tensor = {
        (-1, -1): -1, (-1, 0): -1, (-1, 1): -1,
        (0, -1): -1, (0, 0): 0, (0, 1): 1,
        (1, -1): -1, (1, 0): 1, (1, 1): 1,
    }
    expected_par = {
        (-1, -1): -1, (-1, 0): -1, (-1, 1): 1,
        (0, -1): -1, (0, 0): 0, (0, 1): 1,
        (1, -1): 1, (1, 0): 1, (1, 1): 1,
    }
    for (a, b), v in expected_tensor.items():
        assert p_tensor(a, b) == v
    for (a, b), v in expected_par.items():
        assert p_par(a, b) == v
    # par is the de Morgan dual of tensor
    for a, b in itertools.product((-1, 0, 1), repeat=2):
        assert p_par(a, b) == -p_tensor(-a, -b)
    assert len(TENSOR_TABLE) == len(PAR_TABLE) == 3


def test_dual():
    b = bool_board()
    dd = dual(dual(b))
    assert dd.es.events == b.es.events and dict(dd.es.polarity) == dict(b.es.polarity)
    for x in b.es.configurations():
        assert dual(b).kappa(x) == -b.kappa(x)
        assert dd.kappa(x) == b.kappa(x)
    assert all(dual(b).es.pol(e) == "+" for e in dual(b).es.minimal_events())


def test_tensor_configurations_are_pairs():
    a, b = bool_board(), tensor(o_board(), bool_board())
    g = tensor(a, b)
    pairs = {pair_config(x, y) for x in a.es.configurations() for y in b.es.configurations()}
    assert set(g.es.configurations()) == pairs
    for x in a.es.configurations():
        for y in b.es.configurations():
            z = pair_config(x, y)
            assert split(z, 0) == x and split(z, 1) == y
            assert g.kappa(z) == p_tensor(a.kappa(x), b.kappa(y))
    assert len(g.complete()) == len(a.complete()) * len(b.complete())


def test_tensor_and_par_payoff_samples():
    o = o_board()
    g = tensor(o, dual(dual(o)))
    # κ(x)=0 on the left, κ(y)=1 on the right
    assert g.kappa(pair_config({0}, set())) == 1
    assert par(dual(bool_board()), o).kappa(pair_config({0}, set())) == 1


def test_with_product():
    o = o_board()
    w = with_product(o, o)
    assert len([x for x in w.es.configurations() if x]) == 2
    assert w.is_strict()
    assert w.kappa(frozenset()) == 1
    b = bool_board()
    wb = with_product(b, o)
    expected = {inj(0, x) for x in b.complete()} | {inj(1, x) for x in o.complete()}
    assert set(wb.complete()) == expected
    with pytest.raises(ValidationError):
        with_product(empty_board(), o)


def test_bang_examples():
    bi = bang(empty_board(), 3)
    assert bi.es.configurations() == [frozenset()]
    assert bi.kappa(frozenset()) == 0
    assert len(bang(o_board(), 2).es.configurations()) == 4
    assert len(complete_configs(bang(o_board(), 3))) == 8
    with pytest.raises(ValidationError):
        bang(dual(o_board()), 2)


def test_bang_of_strict_board_completes_copywise():
    b = bool_board()
    g = bang(b, 2)
    comp = set(g.complete())
    fams = set()
    for choice in itertools.product([None] + b.complete(), repeat=2):
        fams.add(frozenset((i, e) for i, x in enumerate(choice) if x is not None for e in x))
    assert comp == fams


def test_lolli_dependency_and_complete_configs():
    o = o_board()
    g = lolli(o, o)
    assert g.es.leq((1, 0), (0, 0, 0))
    a, b = bool_board(), with_product(o, bool_board())
    g2 = lolli(a, b)
    expected = {lolli_config(g2, x, y) for x in a.complete() for y in b.complete()}
    assert set(g2.complete()) == expected
    assert len(g2.complete()) == len(a.complete()) * len(b.complete())


def test_arrow_at_width_one():
    g = arrow(o_board(), o_board(), 1)
    assert len(g.complete()) == 2


def test_arena_validation():
    assert validate_arena(bool_board()).ok
    es = EventStructure.build([1, 2], [(1, 2)], polarity={1: "+", 2: "+"})
    rep = validate_arena(game_from_es(es))
    assert any("alternate" in v for v in rep.violations)
    assert validate_arena(hom(bool_board(), tensor(bool_board(), o_board()))).ok


@pytest.mark.parametrize("expr", [
    "bool", "o", "I", "tensor(bool,o)", "hom(bool,bool)", "with(o,bool)", "lolli(bool,o)",
    "bang[2](bool)", "arrow[2](o,o)", "hom(bang[2](o),with(o,o))",
])
def test_constructed_boards_validate(expr):
    g = parse_game_expr(expr)
    assert validate_board(g).ok
    assert validate_arena(g).ok
    if g.is_negative():
        assert g.kappa(frozenset()) >= 0


def test_game_expression_errors():
    with pytest.raises(ParseError):
        parse_game_expr("bang(o)")
    with pytest.raises(ParseError):
        parse_game_expr("tensor(o)")
    with pytest.raises(ParseError):
        parse_game_expr("nosuch")


GAME_TEXT = """
event 1 pol=-
event 2 pol=-
sym s : {1->2}
polarity-class s neg
payoff {} 1
payoff {1} 0
payoff-default -1
conflict 1 2
"""


def test_parse_game_with_symmetry_and_payoff():
    g = parse_game(GAME_TEXT)
    assert g.kappa(frozenset({2})) == 0  # symmetric closure of the {1} line
    assert g.kappa(frozenset()) == 1
    assert g.is_strict()
    assert validate_board(g).ok
    with pytest.raises(ParseError):
        parse_game("event 1\nsym s : {1=>1}\n")
