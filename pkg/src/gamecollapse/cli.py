"""Command-line entry point: ``gamecollapse <verb> ...``.

Strategies are read from ``.es`` files (see :func:`~gamecollapse.strategies.parse_strategy`),
games from expressions such as ``bang[2](bool)``, λ-terms and points as in
:mod:`gamecollapse.lam`.  Output is a JSON object (``--format json``) or an
aligned text table; both carry the same fields and are byte-identical
across runs unless ``--timing`` is given.

Exit codes: 0 ok, 1 parse error, 2 validation failure, 3 truncation
overflow, 4 law-check failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .collapse import (
    all_points,
    bang_functors,
    collapse_kleisli,
    config_groupoid,
    collapse_strategy,
    pcomp,
    pcomp_report,
    pid,
    unit_triangle,
)
from .dist import (
    SymGroupoid,
    associator,
    check_class_map,
    left_unitor,
    promotion_dagger,
    right_unitor,
    theta_iso,
    validate_groupoid,
    validate_nat,
)
from .es import ParseError, to_dot
from .games import load_game
from .lam import itypes as T
from .lam.correspond import correspondence_check
from .lam.derivations import DerivationError, itd, parse_point, show_point
from .lam.interp import game_witnesses, interpret
from .lam.laws import action_suite, class_action_suite, order_suite
from .lam.terms import free_vars, parse_term, show
from .lam.universal import required_truncation
from .randgen import random_arena, random_chain, random_composable, random_strategies
from .strategies import (
    Strategy,
    as_hom,
    compose,
    copycat,
    curry,
    dereliction,
    dump_strategy,
    pairing,
    parse_strategy,
    promotion,
    strategy_dot,
    tensor_strategies,
    validate_strategy,
    validate_visible,
    validate_winning,
)
from .util import Report, TruncationError, ValidationError, ssorted

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_TRUNCATION, EXIT_LAWS = 0, 1, 2, 3, 4
BOUNDS_ENV = "GAMECOLLAPSE_BOUNDS"
SUITES = ("copycat", "pcomp", "unit", "bang", "derivations", "distributors")


class LawFailure(Exception):
    """A law suite found violations; carries the finished output."""

    def __init__(self, out: dict):
        super().__init__("law check failed")
        self.out = out


class CheckFailure(Exception):
    """A validation verb found violations; carries the finished output."""

    def __init__(self, out: dict):
        super().__init__("validation failed")
        self.out = out


# -- rendering ---------------------------------------------------------------------------------


def _compact(x) -> str:
    if isinstance(x, (frozenset, set)):
        return "{" + ",".join(_compact(e) for e in ssorted(x)) + "}"
    if isinstance(x, tuple):
        inner = ",".join(_compact(e) for e in x)
        return f"({inner},)" if len(x) == 1 else f"({inner})"
    return repr(x).replace(" ", "")


def _text(out: dict) -> str:
    rows: list[tuple[str, str]] = []

    def walk(prefix: str, v) -> None:
        if isinstance(v, dict):
            for k in v:
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        elif isinstance(v, list) and v and all(isinstance(i, dict) for i in v):
            for i, item in enumerate(v):
                walk(f"{prefix}[{i}]", item)
        elif isinstance(v, list):
            rows.append((prefix, ", ".join(str(i) for i in v) if v else "-"))
        else:
            rows.append((prefix, str(v).lower() if isinstance(v, bool) else str(v)))

    walk("", out)
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def render(out: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out, indent=2, ensure_ascii=False) + "\n"
    return _text(out)


def _pairs(bij) -> list:
    return [[_compact(a), _compact(b)] for a, b in ssorted(bij.pairs)]


def _witness(w) -> dict:
    """A positive witness with its provenance: both symmetries as pair lists."""
    return {"negative": _pairs(w.neg), "configuration": [_compact(e) for e in ssorted(w.config)],
            "positive": _pairs(w.pos)}


def _sort_points(points: list) -> None:
    points.sort(key=lambda p: (len(p["source"]), p["source"], len(p["target"]), p["target"]))


def _counts(d, pts: Iterable[tuple]) -> list:
    rows = [{"source": _compact(a), "target": _compact(b), "count": d.count(a, b)} for a, b in pts]
    rows = [r for r in rows if r["count"]]
    _sort_points(rows)
    return rows


def _report(rep: Report) -> dict:
    return {"subject": rep.subject, "ok": rep.ok, "violations": list(rep.violations)}


# -- inputs ------------------------------------------------------------------------------------


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise ParseError(f"no such file: {path}")
    return p.read_text()


def load_strategy(path: str, name: str | None = None) -> Strategy:
    p = Path(path)
    return parse_strategy(_read(path), name or p.stem, p.parent)


def bounds_from_env() -> dict:
    """``GAMECOLLAPSE_BOUNDS="depth=2,width=3,maxlen=3"``; unset keys are absent."""
    raw = os.environ.get(BOUNDS_ENV, "").strip()
    out: dict = {}
    if not raw:
        return out
    for item in raw.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in ("depth", "width", "maxlen") or not value.strip().isdigit() or int(value) < 1:
            raise ParseError(f"{BOUNDS_ENV}: expected depth=N,width=N,maxlen=N, got {raw!r}")
        out[key] = int(value)
    return out


def _term_and_names(args) -> tuple:
    names = [v for v in args.vars.split(",") if v] if args.vars is not None else None
    term = parse_term(args.term, free=names)
    if names is None:
        names = free_vars(term)
    ctx, typ = parse_point(args.point)
    if len(ctx) != len(names):
        raise ParseError(f"the point has {len(ctx)} context sequence(s) for {len(names)} variable(s) {names}")
    return term, names, ctx, typ


def _truncation(args, ctx, typ) -> tuple[int, int]:
    env = bounds_from_env()
    need = required_truncation(ctx, typ)
    depth = args.depth or env.get("depth") or need[0]
    width = args.width or env.get("width") or need[1]
    if depth < need[0] or width < need[1]:
        raise TruncationError(f"the point needs depth {need[0]} and width {need[1]}, got {depth} and {width}")
    return depth, width


def _strategy_out(verb: str, s: Strategy) -> dict:
    return {"verb": verb, "name": s.name, "game": s.game.name, "events": len(s.es),
            "strategy": dump_strategy(s).rstrip("\n").split("\n")}


# -- verbs: strategies -------------------------------------------------------------------------


def cmd_compose(args) -> dict:
    s, t = load_strategy(args.sigma, "σ"), load_strategy(args.tau, "τ")
    return _strategy_out("compose", compose(s, t))


def cmd_tensor(args) -> dict:
    return _strategy_out("tensor", tensor_strategies(load_strategy(args.sigma, "σ"), load_strategy(args.tau, "τ")))


def cmd_pair(args) -> dict:
    return _strategy_out("pair", pairing(load_strategy(args.sigma, "σ"), load_strategy(args.tau, "τ")))


def cmd_promote(args) -> dict:
    return _strategy_out("promote", promotion(load_strategy(args.sigma, "σ"), args.width))


def cmd_curry(args) -> dict:
    return _strategy_out("curry", curry(load_strategy(args.sigma, "σ")))


def cmd_check(args) -> dict:
    s = load_strategy(args.sigma)
    reports = [validate_strategy(s, thin=args.thin)]
    if args.visible:
        reports.append(validate_visible(s))
    if args.winning:
        reports.append(validate_winning(s))
    out = {"verb": "check", "name": s.name, "game": s.game.name, "events": len(s.es),
           "ok": all(r.ok for r in reports), "reports": [_report(r) for r in reports]}
    if not out["ok"]:
        raise CheckFailure(out)
    return out


def cmd_collapse(args) -> dict:
    s = load_strategy(args.sigma)
    d = collapse_strategy(s, complete=args.complete)
    points = []
    for a, b in all_points(d):
        row = {"source": _compact(a), "target": _compact(b), "count": len(d.at(a, b))}
        if args.witnesses:
            row["witnesses"] = sorted((_witness(w) for w in d.at(a, b)), key=json.dumps)
        points.append(row)
    _sort_points(points)
    return {"verb": "collapse", "name": d.name, "complete": args.complete,
            "total": sum(p["count"] for p in points), "points": points}


def cmd_pcomp(args) -> dict:
    s, t = load_strategy(args.sigma, "σ"), load_strategy(args.tau, "τ")
    rep = pcomp_report(s, t, complete=args.complete)
    rows = []
    for (a, c), (n, m, k) in rep.points.items():
        rows.append({"source": _compact(a), "target": _compact(c), "composite": n, "coend": m, "images": k})
    _sort_points(rows)
    out = {"verb": "pcomp", "injective": rep.injective, "surjective": rep.surjective,
           "bijective": rep.bijective, "naturality": _report(rep.report)}
    if args.count:
        out["composite"] = sum(r["composite"] for r in rows)
        out["coend"] = sum(r["coend"] for r in rows)
        gaps = [r for r in rows if r["composite"] != r["coend"]]
        out["mismatched_points"] = gaps
    else:
        out["points"] = rows
    return out


def cmd_pid_check(args) -> dict:
    game = load_game(args.game, Path.cwd())
    d, ident, fwd, bwd = pid(game, complete=args.complete)
    rep = Report(f"pid on {game.name}")
    rep.extend(validate_nat(fwd, iso=True))
    rep.extend(validate_nat(bwd, iso=True))
    count = 0
    for a, b in all_points(d):
        for w in d.at(a, b):
            count += 1
            if bwd(a, b, fwd(a, b, w)) != w:
                rep.add(f"pid⁻¹∘pid moves {w!r}")
    out = {"verb": "pid-check", "game": game.name, "witnesses": count, "report": _report(rep)}
    if not rep.ok:
        raise LawFailure(out)
    return out


def cmd_kleisli_collapse(args) -> dict:
    s = _kleisli_input(args)
    k = collapse_kleisli(s, _maxlen(args))
    points = _counts(k, ((a, b) for a in k.source.objects() for b in k.target.objects()))
    return {"verb": "kleisli-collapse", "name": s.name, "game": s.game.name,
            "total": sum(p["count"] for p in points), "points": points}


def _maxlen(args) -> int | None:
    return args.maxlen or bounds_from_env().get("maxlen")


def _kleisli_input(args) -> Strategy:
    """The strategy as given on ``!A ⊢ B``, or precomposed with dereliction at ``--width``."""
    s = load_strategy(args.sigma)
    if s.is_hom and s.left.kind == "bang":
        if args.width is not None and args.width != s.left.width:
            raise ValidationError(f"{s.name} is already on a bang of width {s.left.width}, not {args.width}")
        return s
    if args.width is None:
        raise ValidationError(f"{s.name} is not on a game !A ⊢ B; pass --width to precompose dereliction")
    s = as_hom(s)
    return compose(dereliction(s.left, args.width), s)


# -- verbs: distributors -----------------------------------------------------------------------


def cmd_dcompose(args) -> dict:
    s, t = load_strategy(args.sigma, "σ"), load_strategy(args.tau, "τ")
    _, both, _ = pcomp(s, t, complete=args.complete)
    points = _counts(both, ((a, c) for a in both.source.objects() for c in both.target.objects()))
    return {"verb": "dcompose", "name": both.name, "complete": args.complete,
            "classes": sum(p["count"] for p in points), "points": points}


def cmd_dsym(args) -> dict:
    game = load_game(args.game, Path.cwd())
    maxlen = _maxlen(args) or 2
    sym = SymGroupoid(config_groupoid(game, complete=args.complete), maxlen)
    objs = sym.objects()
    lengths = [sum(1 for o in objs if len(o) == n) for n in range(maxlen + 1)]
    morphisms = sum(len(sym.hom(a, b)) for a in objs for b in objs)
    return {"verb": "dsym", "groupoid": sym.name, "objects": len(objs), "objects_by_length": lengths,
            "morphisms": morphisms, "report": _report(validate_groupoid(sym))}


def cmd_dpromote(args) -> dict:
    s = _kleisli_input(args)
    maxlen = _maxlen(args) or 2
    prom = promotion_dagger(collapse_kleisli(s, maxlen), maxlen)
    points = _counts(prom, ((a, b) for a in prom.source.objects() for b in prom.target.objects()))
    return {"verb": "dpromote", "name": s.name, "maxlen": maxlen,
            "total": sum(p["count"] for p in points), "points": points}


def dist_laws(rng: random.Random, count: int) -> Report:
    """Unitors, associator and θ as class bijections on random instances."""
    rep = Report("distributor unitors, associator and θ")
    for i, s in enumerate(random_strategies(rng, count, winning=True)):
        d = collapse_strategy(s)
        pts = all_points(d)
        for label, (_, nt) in (("λ", left_unitor(d)), ("ρ", right_unitor(d))):
            rep.extend(check_class_map(nt, pts), f"strategy {i} {label}: ")
    for i in range(count):
        chain = [collapse_strategy(s) for s in random_chain(rng, 3)]
        right_side, _, nt = associator(*chain)
        pts = [p for p in all_points(right_side)]
        rep.extend(check_class_map(nt, pts), f"chain {i}: ")
        game = random_arena(rng, 2, strict=True, name=f"A{i}")
        _, _, theta = theta_iso(config_groupoid(game, complete=True), 2)
        pts = [(a, b) for a in theta.source.source.objects() for b in theta.source.target.objects()]
        rep.extend(validate_nat(theta, pts, iso=True), f"{game.name} θ: ")
    return rep


def cmd_dcheck_laws(args) -> dict:
    rep = dist_laws(random.Random(args.seed), args.count)
    out = {"verb": "dcheck-laws", "seed": args.seed, "count": args.count, "ok": rep.ok,
           "violations": rep.violations[:20]}
    if not rep.ok:
        raise LawFailure(out)
    return out


# -- verbs: λ-terms ----------------------------------------------------------------------------


def cmd_itd(args) -> dict:
    term, names, ctx, typ = _term_and_names(args)
    dist = itd(term, names, ctx, typ, star=not args.plain, widen=args.widen)
    return {"verb": "itd", "term": show(term), "vars": names, "point": show_point(ctx, typ),
            "model": "D" if args.plain else "D*", "derivations": len(dist.derivations),
            "classes": dist.count, "class_sizes": [len(c) for c in dist.classes]}


def cmd_interp(args) -> dict:
    term, names, ctx, typ = _term_and_names(args)
    depth, width = _truncation(args, ctx, typ)
    out = {"verb": "interp", "term": show(term), "vars": names, "point": show_point(ctx, typ),
           "depth": depth, "width": width}
    if args.count_witnesses:
        side = game_witnesses(term, names, ctx, typ, depth, width)
        out["events"] = len(side.strategy.es)
        out["witnesses"] = side.count
    else:
        out["events"] = len(interpret(term, names, depth, width).es)
    return out


def cmd_correspond(args) -> dict:
    term, names, ctx, typ = _term_and_names(args)
    depth, width = _truncation(args, ctx, typ)
    c = correspondence_check(term, names, ctx, typ, depth, width, stability=not args.no_stability)
    out = {"verb": "correspond", "term": show(term), "vars": names, "point": show_point(ctx, typ),
           "depth": depth, "width": width, "classes": c.derivations.count, "witnesses": c.game.count,
           "bijection": c.bijection is not None, "report": _report(c.report)}
    if c.bigger is not None:
        out["witnesses_at_larger_truncation"] = c.bigger.count
    if not c.ok:
        raise CheckFailure(out)
    return out


# -- verbs: laws and diagrams ------------------------------------------------------------------


def suite_copycat(rng: random.Random, count: int) -> Report:
    rep = Report("copycat: valid, collapses to the symmetries, pid invertible")
    for i in range(count):
        game = random_arena(rng, 3, strict=rng.random() < 0.5, name=f"A{i}")
        cc = copycat(game)
        rep.extend(validate_strategy(cc), f"{game.name}: ")
        d = collapse_strategy(cc)
        for a, b in all_points(d):
            if d.count(a, b) != len(game.tilde.between(a, b)):
                rep.add(f"{game.name}: witness count differs from symmetries at {_compact(a)}, {_compact(b)}")
        _, _, fwd, bwd = pid(game)
        rep.extend(validate_nat(fwd, iso=True), f"{game.name}: ")
    return rep


def suite_pcomp(rng: random.Random, count: int) -> Report:
    rep = Report("pcomp: bijective on visible winning pairs, injective on thin pairs")
    for i in range(count):
        s, t = random_composable(rng, visible=True, winning=True, bang_prob=0.3)
        r = pcomp_report(s, t, complete=True)
        rep.extend(r.report, f"pair {i}: ")
        if not r.bijective:
            rep.add(f"visible pair {i}: pcomp is not bijective")
        s, t = random_composable(rng, visible=False, winning=False)
        r = pcomp_report(s, t)
        if not r.injective:
            rep.add(f"thin pair {i}: pcomp is not injective")
    return rep


def suite_unit(rng: random.Random, count: int) -> Report:
    rep = Report("unit triangle and pid")
    for i, s in enumerate(random_strategies(rng, count, winning=True, bang=True)):
        rep.extend(unit_triangle(s), f"strategy {i}: ")
    return rep


def suite_bang(rng: random.Random, count: int) -> Report:
    rep = Report("C0(!A) against Sym(C0(A))")
    for i in range(count):
        game = random_arena(rng, 2, strict=True, name=f"A{i}")
        rep.extend(bang_functors(game, rng.randint(1, 3)).check(), f"{game.name}: ")
    return rep


def suite_derivations(rng: random.Random, count: int) -> Report:
    seed = rng.randrange(1 << 30)
    rep = Report("derivation actions and congruence")
    for sub in (action_suite(max(count, 1) * 50, seed), class_action_suite(), order_suite(seed)):
        rep.extend(sub, f"{sub.subject}: ")
    return rep


SUITE_FNS: dict[str, Callable[[random.Random, int], Report]] = {
    "copycat": suite_copycat, "pcomp": suite_pcomp, "unit": suite_unit,
    "bang": suite_bang, "derivations": suite_derivations, "distributors": dist_laws,
}


def cmd_check_laws(args) -> dict:
    names = SUITES if args.suite == "all" else (args.suite,)
    results = []
    for name in names:
        rep = SUITE_FNS[name](random.Random(args.seed), args.count)
        results.append({"suite": name, "ok": rep.ok, "violations": rep.violations[:20]})
    out = {"verb": "check-laws", "seed": args.seed, "count": args.count,
           "passed": [r["suite"] for r in results if r["ok"]],
           "failed": [r["suite"] for r in results if not r["ok"]], "suites": results}
    if out["failed"]:
        raise LawFailure(out)
    return out


def cmd_diagram(args) -> dict:
    sources = [args.strategy is not None, args.game is not None, args.term is not None]
    if sum(sources) != 1:
        raise ParseError("diagram needs exactly one of --strategy, --game, --term")
    if args.strategy is not None:
        dot = strategy_dot(load_strategy(args.strategy), name="strategy")
    elif args.game is not None:
        dot = to_dot(load_game(args.game, Path.cwd()).es, name="game")
    else:
        term, names, ctx, typ = _term_and_names(args)
        depth, width = _truncation(args, ctx, typ)
        dot = strategy_dot(game_witnesses(term, names, ctx, typ, depth, width).strategy, name="term")
    return {"verb": "diagram", "dot": dot}


# -- argument parsing --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gamecollapse", description=__doc__.split("\n\n")[0])
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds (breaks byte-identical output)")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        return sp

    for name, fn, help in [("compose", cmd_compose, "compose σ : A ⊢ B with τ : B ⊢ C"),
                           ("tensor", cmd_tensor, "tensor product of two strategies"),
                           ("pair", cmd_pair, "pairing ⟨σ, τ⟩ into a with-product"),
                           ("pcomp", cmd_pcomp, "compare ⟦τ⊙σ⟧ with ⟦τ⟧•⟦σ⟧ point by point")]:
        sp = verb(name, fn, help)
        sp.add_argument("sigma")
        sp.add_argument("tau")
        if name == "pcomp":
            sp.add_argument("--count", action="store_true", help="totals and mismatched points only")
            sp.add_argument("--complete", action="store_true", help="restrict to complete configurations")

    sp = verb("promote", cmd_promote, "promotion σ! on !A ⊢ !B")
    sp.add_argument("sigma")
    sp.add_argument("--width", type=int, default=2)
    sp = verb("curry", cmd_curry, "currying of σ on A ⊗ B ⊢ C")
    sp.add_argument("sigma")
    sp = verb("check", cmd_check, "validate a strategy")
    sp.add_argument("sigma")
    sp.add_argument("--visible", action="store_true")
    sp.add_argument("--winning", action="store_true")
    sp.add_argument("--thin", action="store_true", help="also check the symmetry conditions")
    sp = verb("collapse", cmd_collapse, "witness counts of ⟦σ⟧")
    sp.add_argument("sigma")
    sp.add_argument("--complete", action="store_true")
    sp.add_argument("--witnesses", action="store_true", help="dump each witness with both symmetries")
    for name, fn, help in [("kleisli-collapse", cmd_kleisli_collapse, "witness counts of ⟦σ⟧ on sequences"),
                           ("dpromote", cmd_dpromote, "the promotion of the Kleisli collapse")]:
        sp = verb(name, fn, help)
        sp.add_argument("sigma")
        sp.add_argument("--width", type=int, help="precompose dereliction into !A of this width")
        sp.add_argument("--maxlen", type=int)
    sp = verb("dcompose", cmd_dcompose, "coend composite ⟦τ⟧•⟦σ⟧")
    sp.add_argument("sigma")
    sp.add_argument("tau")
    sp.add_argument("--complete", action="store_true")
    sp = verb("dsym", cmd_dsym, "Sym of the configuration groupoid of a game")
    sp.add_argument("game")
    sp.add_argument("--maxlen", type=int)
    sp.add_argument("--complete", action="store_true")
    sp = verb("dcheck-laws", cmd_dcheck_laws, "seeded distributor law suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=5)
    sp = verb("pid-check", cmd_pid_check, "⟦copycat⟧ ≅ identity on a game expression")
    sp.add_argument("game")
    sp.add_argument("--complete", action="store_true")

    for name, fn, help in [("itd", cmd_itd, "derivation classes of a term at a point"),
                           ("interp", cmd_interp, "the strategy of a term on U"),
                           ("correspond", cmd_correspond, "derivation classes against game witnesses")]:
        sp = verb(name, fn, help)
        sp.add_argument("term")
        sp.add_argument("--point", required=True, help="'seq;…;seq;type', e.g. '((*,*)-o*,*,*);*'")
        sp.add_argument("--vars", help="comma-separated free variables (default: order of occurrence)")
        if name == "itd":
            sp.add_argument("--plain", action="store_true", help="use D instead of D*")
            sp.add_argument("--widen", type=int, default=0, help="extra rounds of redex argument types")
        else:
            sp.add_argument("--depth", type=int)
            sp.add_argument("--width", type=int)
        if name == "interp":
            sp.add_argument("--count-witnesses", action="store_true")
        if name == "correspond":
            sp.add_argument("--no-stability", action="store_true", help="skip the larger-truncation recount")

    sp = verb("check-laws", cmd_check_laws, "seeded property suites")
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=10)
    sp = verb("diagram", cmd_diagram, "DOT rendering of a strategy, game or term")
    sp.add_argument("--strategy")
    sp.add_argument("--game")
    sp.add_argument("--term")
    sp.add_argument("--point")
    sp.add_argument("--vars")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--width", type=int)
    return p


def _error(verb: str, kind: str, err: Exception) -> dict:
    return {"verb": verb, "error": kind, "message": str(err)}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    if args.verb == "diagram" and args.term is not None and args.point is None:
        print("gamecollapse: diagram --term needs --point", file=stderr)
        return EXIT_PARSE
    start = time.perf_counter()
    code = EXIT_OK
    try:
        out = args.fn(args)
    except (LawFailure, CheckFailure) as exc:
        out = exc.out
        code = EXIT_LAWS if isinstance(exc, LawFailure) else EXIT_VALIDATION
    except ParseError as exc:
        out, code = _error(args.verb, "parse", exc), EXIT_PARSE
    except TruncationError as exc:
        out, code = _error(args.verb, "truncation", exc), EXIT_TRUNCATION
    except (ValidationError, DerivationError, T.MorphismError) as exc:
        out, code = _error(args.verb, "validation", exc), EXIT_VALIDATION
    if args.timing:
        out["seconds"] = round(time.perf_counter() - start, 3)
    if args.verb == "diagram" and code == EXIT_OK and args.format == "text":
        stdout.write(out["dot"])
    else:
        stdout.write(render(out, args.format))
    if code != EXIT_OK and "error" in out:
        print(f"gamecollapse {args.verb}: {out['message']}", file=stderr)
    return code


def main(argv: Iterable[str] | None = None) -> None:
    sys.exit(run(None if argv is None else list(argv)))


if __name__ == "__main__":
    main()
