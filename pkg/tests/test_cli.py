from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from gamecollapse.cli import (
    BOUNDS_ENV,
    EXIT_LAWS,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_TRUNCATION,
    EXIT_VALIDATION,
    SUITE_FNS,
    run,
)
from gamecollapse.util import Report

DATA = Path(__file__).resolve().parent.parent / "data"
SIGMA, TAU, AND = str(DATA / "fig1-sigma.es"), str(DATA / "fig1-tau.es"), str(DATA / "and.es")
XX_POINT = "((*,*)-o*,*,*);*"


def call(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv: str) -> tuple[int, dict]:
    code, out, _ = call("--format", "json", *argv)
    return code, json.loads(out)


def test_pcomp_counts_on_the_two_strategy_example():
    code, out = call_json("pcomp", "--count", SIGMA, TAU)
    assert code == EXIT_OK
    assert out["injective"] and not out["surjective"] and not out["bijective"]
    gap = {(p["source"], p["target"]): (p["composite"], p["coend"]) for p in out["mismatched_points"]}
    assert gap[("{}", "{0,1}")] == (0, 1)


def test_pcomp_lists_every_point_without_count():
    code, out = call_json("pcomp", SIGMA, TAU)
    assert code == EXIT_OK
    assert len(out["points"]) >= len(out.get("mismatched_points", [])) and "composite" not in out


def test_correspond_on_self_application():
    code, out = call_json("correspond", "x x", "--point", XX_POINT)
    assert code == EXIT_OK
    assert out["classes"] == out["witnesses"] == 2 and out["bijection"]
    assert out["witnesses_at_larger_truncation"] == 2


def test_interp_and_itd_agree_on_counts():
    _, a = call_json("interp", "x x", "--point", XX_POINT, "--count-witnesses")
    _, b = call_json("itd", "x x", "--point", XX_POINT)
    assert a["witnesses"] == b["classes"] == 2
    assert (a["depth"], a["width"]) == (2, 3)


def test_itd_respects_variable_order():
    # the two arguments can be matched to the two copies of y in two ways
    _, out = call_json("itd", "x y", "--vars", "y,x", "--point", "(*,*);((*,*)-o*);*")
    assert out["vars"] == ["y", "x"] and out["classes"] == 2


@pytest.mark.parametrize("verb", ["compose", "tensor"])
def test_binary_strategy_verbs(verb):
    code, out = call_json(verb, SIGMA, TAU)
    assert code == EXIT_OK and out["events"] >= 1 and out["strategy"][0].startswith("game ")


def test_unary_strategy_verbs():
    assert call_json("promote", AND, "--width", "1")[0] == EXIT_OK
    code, out = call_json("check", AND, "--visible", "--winning")
    assert code == EXIT_OK and out["ok"] and len(out["reports"]) == 3
    code, out = call_json("collapse", AND, "--complete")
    assert code == EXIT_OK and out["total"] == sum(p["count"] for p in out["points"])
    code, out = call_json("kleisli-collapse", AND, "--maxlen", "2")
    assert code == EXIT_OK and out["total"] > 0


def test_collapse_witnesses_carry_provenance():
    _, out = call_json("collapse", SIGMA, "--witnesses")
    for p in out["points"]:
        assert len(p["witnesses"]) == p["count"]
        for w in p["witnesses"]:
            assert set(w) == {"negative", "configuration", "positive"}
            assert all(len(pair) == 2 for pair in w["negative"] + w["positive"])


def test_distributor_verbs():
    code, out = call_json("dcompose", SIGMA, TAU)
    assert code == EXIT_OK and out["classes"] == sum(p["count"] for p in out["points"])
    assert {"source": "{}", "target": "{0,1}", "count": 1} in out["points"]
    code, out = call_json("dsym", "bool", "--maxlen", "2")
    # C~(bool) is discrete on 4 objects: each pair (a, b) has its identity and a swap onto (b, a)
    assert code == EXIT_OK and out["objects_by_length"] == [1, 4, 16] and out["morphisms"] == 37
    code, out = call_json("dpromote", AND, "--maxlen", "2")
    assert code == EXIT_OK and {"source": "()", "target": "()", "count": 1} in out["points"]
    code, out = call_json("dcheck-laws", "--count", "2")
    assert code == EXIT_OK and out["ok"]


def test_kleisli_width_mismatch_is_a_validation_error():
    assert call("kleisli-collapse", AND, "--width", "3")[0] == EXIT_VALIDATION
    assert call("kleisli-collapse", SIGMA)[0] == EXIT_VALIDATION


def test_pid_check_on_game_expressions():
    for expr in ("bool", "bang[2](bool)", "qa"):
        code, out = call_json("pid-check", expr)
        assert code == EXIT_OK and out["report"]["ok"], expr


def test_check_laws_quick_suites():
    for suite in ("copycat", "unit", "derivations"):
        code, out = call_json("check-laws", "--suite", suite, "--count", "2", "--seed", "3")
        assert code == EXIT_OK and out["passed"] == [suite]


def test_failing_suite_exits_with_law_code(monkeypatch):
    def broken(rng, count):
        rep = Report("broken")
        rep.add("always fails")
        return rep

    monkeypatch.setitem(SUITE_FNS, "unit", broken)
    code, out = call_json("check-laws", "--suite", "unit")
    assert code == EXIT_LAWS and out["failed"] == ["unit"]


def test_diagram_outputs_dot():
    for argv in (["--strategy", AND], ["--game", "bool"], ["--term", "x", "--point", "(*);*"]):
        code, out, _ = call("diagram", *argv)
        assert code == EXIT_OK and out.startswith("digraph "), argv


def test_text_and_json_carry_the_same_fields():
    _, text, _ = call("itd", "x x", "--point", XX_POINT)
    _, js = call_json("itd", "x x", "--point", XX_POINT)
    keys = [line.split()[0] for line in text.splitlines()]
    assert keys == list(js)


@pytest.mark.parametrize("argv", [
    ["--format", "json", "pcomp", SIGMA, TAU],
    ["--format", "json", "correspond", "x x", "--point", XX_POINT, "--no-stability"],
    ["collapse", str(DATA / "fig1-sigma.es")],
    ["check-laws", "--suite", "derivations", "--count", "1"],
])
def test_reruns_are_byte_identical(argv):
    assert call(*argv) == call(*argv)


def test_timing_is_opt_in():
    _, plain = call_json("itd", "x", "--point", "(*);*")
    _, timed = call_json("--timing", "itd", "x", "--point", "(*);*")
    assert "seconds" not in plain and timed["seconds"] >= 0


# -- error paths -----------------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["no-such-verb"],
    ["compose", SIGMA],
    ["compose", "/nonexistent.es", TAU],
    ["itd", "\\x.", "--point", "*"],
    ["itd", "x", "--point", "(*;*"],
    ["itd", "x y", "--point", "(*);*"],
    ["pid-check", "bogus(bool"],
    ["diagram"],
    ["diagram", "--term", "x"],
])
def test_parse_errors(argv):
    code, _, _ = call(*argv)
    assert code == EXIT_PARSE


def test_malformed_strategy_file_is_a_parse_error(tmp_path):
    bad = tmp_path / "bad.es"
    bad.write_text("game bool\nevent 0 pol=?\n")
    code, out = call_json("check", str(bad))
    assert code == EXIT_PARSE and out["error"] == "parse"


def test_invalid_strategy_is_a_validation_error(tmp_path):
    # a positive event below nothing in a game whose roots are negative
    bad = tmp_path / "bad.es"
    bad.write_text("game bool\nevent 0 pol=+\ndisplay 0 -> 1\n")
    code, _, _ = call("check", str(bad))
    assert code == EXIT_VALIDATION


def test_composition_across_mismatched_games_is_a_validation_error():
    code, out = call_json("compose", AND, AND)
    assert code == EXIT_VALIDATION and out["error"] == "validation"


def test_small_truncation_is_a_truncation_error():
    code, out = call_json("interp", "x x", "--point", XX_POINT, "--depth", "1")
    assert code == EXIT_TRUNCATION and out["error"] == "truncation"


def test_bounds_from_environment(monkeypatch):
    monkeypatch.setenv(BOUNDS_ENV, "depth=3,width=3")
    _, out = call_json("interp", "x x", "--point", XX_POINT)
    assert (out["depth"], out["width"]) == (3, 3)
    monkeypatch.setenv(BOUNDS_ENV, "depth=1")
    assert call("interp", "x x", "--point", XX_POINT)[0] == EXIT_TRUNCATION
    monkeypatch.setenv(BOUNDS_ENV, "depth=two")
    assert call("interp", "x x", "--point", XX_POINT)[0] == EXIT_PARSE


def test_help_exits_cleanly():
    assert call("--help")[0] == EXIT_OK
