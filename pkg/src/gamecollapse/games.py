"""Games with symmetry and payoff, and their constructors.

Tagging conventions for constructed event ids:

* binary constructions (tensor, par, hom, with) tag the left operand's
  events ``(0, a)`` and the right operand's ``(1, b)``;
* ``bang`` tags copy ``i`` of ``a`` as ``(i, a)``;
* ``lolli`` keeps one copy of the argument per root ``r`` of the result,
  tagged ``(0, r, a)``, and result events ``(1, b)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

from .es import EventStructure, ParseError, parse_es_lines, parse_id, tokenize
from .symmetry import IsoFamily, SymBijection, Tcg, close_family, validate_tcg
from .util import Report, ValidationError, ssorted

# rows/columns indexed by payoff + 1
TENSOR_TABLE = ((-1, -1, -1), (-1, 0, 1), (-1, 1, 1))
PAR_TABLE = ((-1, -1, 1), (-1, 0, 1), (1, 1, 1))


def p_tensor(a: int, b: int) -> int:
    return TENSOR_TABLE[a + 1][b + 1]


def p_par(a: int, b: int) -> int:
    return PAR_TABLE[a + 1][b + 1]


Payoff = Callable[[frozenset], int]


@dataclass(eq=False)
class Game:
    """A thin concurrent game, optionally with a payoff (then a board).

    ``kind``/``parts`` remember how the game was built so that strategies
    and the collapse can split configurations into components.
    """

    es: EventStructure
    tilde: IsoFamily
    neg: IsoFamily
    pos: IsoFamily
    payoff_fn: Payoff | None = None
    name: str = "G"
    kind: str = "atom"
    parts: tuple = ()
    width: int = 0
    _kappa: dict = field(default_factory=dict, repr=False)

    @property
    def tcg(self) -> Tcg:
        return Tcg(self.es, self.tilde, self.neg, self.pos)

    @property
    def is_board(self) -> bool:
        return self.payoff_fn is not None

    def kappa(self, x: Iterable) -> int:
        xs = frozenset(x)
        v = self._kappa.get(xs)
        if v is None:
            if self.payoff_fn is None:
                raise ValidationError(f"{self.name} has no payoff")
            v = self.payoff_fn(xs)
            self._kappa[xs] = v
        return v

    def configurations(self) -> list[frozenset]:
        return self.es.configurations()

    def complete(self) -> list[frozenset]:
        return [x for x in self.es.configurations() if self.kappa(x) == 0]

    def is_negative(self) -> bool:
        return all(self.es.pol(e) == "-" for e in self.es.minimal_events())

    def is_strict(self) -> bool:
        if self.payoff_fn is None or not self.is_negative() or self.kappa(frozenset()) != 1:
            return False
        mins = self.es.minimal_events()
        return all(self.es.in_conflict(a, b) for a, b in itertools.combinations(mins, 2))

    def is_well_opened(self) -> bool:
        return self.is_strict() and len(self.es.minimal_events()) == 1

    def __repr__(self) -> str:
        return f"Game({self.name}, {len(self.es)} events)"


def _refamily(f: IsoFamily, es: EventStructure, name: str | None = None) -> IsoFamily:
    return IsoFamily(es, between=f.between, name=name or f.name)


def game_from_es(
    es: EventStructure,
    payoff: Payoff | Mapping | None = None,
    name: str = "G",
    tilde: IsoFamily | None = None,
    neg: IsoFamily | None = None,
    pos: IsoFamily | None = None,
) -> Game:
    ids = IsoFamily.identities(es)
    fn: Payoff | None
    if isinstance(payoff, Mapping):
        table = {frozenset(k): v for k, v in payoff.items()}
        fn = table.__getitem__
    else:
        fn = payoff
    return Game(es, tilde or ids, neg or ids, pos or ids, fn, name)


# -- basic boards ------------------------------------------------------------


def empty_board() -> Game:
    """The unit ``I``: no events, payoff 0."""
    es = EventStructure.build([])
    return game_from_es(es, {frozenset(): 0}, name="I")


def o_board() -> Game:
    """One negative move; the empty configuration has payoff 1."""
    es = EventStructure.build([0], polarity={0: "-"})
    return game_from_es(es, lambda x: 1 if not x else 0, name="o")


def bool_board() -> Game:
    """Question 0 with answers 1 (tt) and 2 (ff)."""
    es = EventStructure.build([0, 1, 2], [(0, 1), (0, 2)], [(1, 2)], {0: "-", 1: "+", 2: "+"})
    table = {frozenset(): 1, frozenset({0}): -1, frozenset({0, 1}): 0, frozenset({0, 2}): 0}
    return game_from_es(es, table, name="bool")


def qa_board() -> Game:
    """Question 0 with the single answer 1."""
    es = EventStructure.build([0, 1], [(0, 1)], (), {0: "-", 1: "+"})
    table = {frozenset(): 1, frozenset({0}): -1, frozenset({0, 1}): 0}
    return game_from_es(es, table, name="qa")


# -- constructors --------------------------------------------------------------


def dual(g: Game) -> Game:
    flip = {"+": "-", "-": "+", ".": "."}
    es = EventStructure.build(
        g.es.events, g.es.cover, [tuple(p) for p in g.es.conflict],
        {e: flip[p] for e, p in g.es.polarity.items()},
    )
    payoff = None if g.payoff_fn is None else (lambda x, k=g.kappa: -k(x))
    return Game(
        es, _refamily(g.tilde, es), _refamily(g.pos, es), _refamily(g.neg, es), payoff,
        name=f"dual({g.name})", kind="dual", parts=(g,),
    )


def split(x: Iterable, tag: int) -> frozenset:
    """Events of a binary construction carrying ``tag``, untagged."""
    return frozenset(e[1] for e in x if e[0] == tag)


def _tag(tag: int, x: Iterable) -> frozenset:
    return frozenset((tag, e) for e in x)


def _tag_pairs(tag: int, th: SymBijection) -> frozenset:
    return frozenset(((tag, a), (tag, b)) for a, b in th.pairs)


def _product_between(fa: IsoFamily, fb: IsoFamily):
    def between(x: frozenset, y: frozenset) -> Iterator[SymBijection]:
        xa, xb, ya, yb = split(x, 0), split(x, 1), split(y, 0), split(y, 1)
        if len(xa) != len(ya):
            return
        la = fa.between(xa, ya)
        if not la:
            return
        for tb in fb.between(xb, yb):
            pb = _tag_pairs(1, tb)
            for ta in la:
                yield SymBijection(_tag_pairs(0, ta) | pb)

    return between


def _binary(a: Game, b: Game, conflicts: Iterable = ()) -> EventStructure:
    evs = [(0, e) for e in a.es.events] + [(1, e) for e in b.es.events]
    causes = [((0, u), (0, v)) for u, v in a.es.cover] + [((1, u), (1, v)) for u, v in b.es.cover]
    confl = [tuple((0, e) for e in p) for p in a.es.conflict]
    confl += [tuple((1, e) for e in p) for p in b.es.conflict]
    confl += list(conflicts)
    pol = {(0, e): a.es.pol(e) for e in a.es.events}
    pol.update({(1, e): b.es.pol(e) for e in b.es.events})
    return EventStructure.build(evs, causes, confl, pol)


def _parallel(a: Game, b: Game, table, name: str, kind: str) -> Game:
    es = _binary(a, b)
    payoff = None
    if a.payoff_fn is not None and b.payoff_fn is not None:
        def payoff(x: frozenset) -> int:
            return table[a.kappa(split(x, 0)) + 1][b.kappa(split(x, 1)) + 1]
    return Game(
        es,
        IsoFamily(es, _product_between(a.tilde, b.tilde), name="tilde"),
        IsoFamily(es, _product_between(a.neg, b.neg), name="neg"),
        IsoFamily(es, _product_between(a.pos, b.pos), name="pos"),
        payoff, name=name, kind=kind, parts=(a, b),
    )


def tensor(a: Game, b: Game) -> Game:
    return _parallel(a, b, TENSOR_TABLE, f"tensor({a.name},{b.name})", "tensor")


def par(a: Game, b: Game) -> Game:
    return _parallel(a, b, PAR_TABLE, f"par({a.name},{b.name})", "par")


def tensor_all(games: Iterable[Game], name: str | None = None) -> Game:
    """n-ary tensor tagging component ``i`` as ``(i, e)``; payoffs combine left to right."""
    games = list(games)
    evs = [(i, e) for i, g in enumerate(games) for e in g.es.events]
    causes = [((i, u), (i, v)) for i, g in enumerate(games) for u, v in g.es.cover]
    confl = [tuple((i, e) for e in p) for i, g in enumerate(games) for p in g.es.conflict]
    pol = {(i, e): g.es.pol(e) for i, g in enumerate(games) for e in g.es.events}
    es = EventStructure.build(evs, causes, confl, pol)

    def fam(attr: str) -> IsoFamily:
        fams = [getattr(g, attr) for g in games]

        def between(x: frozenset, y: frozenset) -> Iterator[SymBijection]:
            options = []
            for i, f in enumerate(fams):
                xi, yi = split(x, i), split(y, i)
                if len(xi) != len(yi):
                    return
                opts = f.between(xi, yi)
                if not opts:
                    return
                options.append([_tag_pairs(i, t) for t in opts])
            for combo in itertools.product(*options):
                yield SymBijection(frozenset().union(*combo))

        return IsoFamily(es, between, name=attr)

    payoff = None
    if all(g.payoff_fn is not None for g in games):
        def payoff(x: frozenset) -> int:
            v = 0
            for i, g in enumerate(games):
                k = g.kappa(split(x, i))
                v = k if i == 0 else p_tensor(v, k)
            return v

    label = name or "tensor(" + ",".join(g.name for g in games) + ")"
    return Game(es, fam("tilde"), fam("neg"), fam("pos"), payoff, name=label, kind="tensor", parts=tuple(games))


def hom(a: Game, b: Game) -> Game:
    """``a ⊢ b``: events of ``a`` (dualized) tagged 0, of ``b`` tagged 1."""
    g = _parallel(dual(a), b, PAR_TABLE, f"hom({a.name},{b.name})", "hom")
    g.parts = (a, b)
    return g


def pair_config(xa: Iterable, xb: Iterable) -> frozenset:
    return _tag(0, xa) | _tag(1, xb)


def with_product(a: Game, b: Game) -> Game:
    for g in (a, b):
        if not g.is_strict():
            raise ValidationError(f"with: {g.name} is not strict")
    cross = [((0, u), (1, v)) for u in a.es.minimal_events() for v in b.es.minimal_events()]
    es = _binary(a, b, cross)

    def fam(fa: IsoFamily, fb: IsoFamily, nm: str) -> IsoFamily:
        def between(x: frozenset, y: frozenset):
            if not x and not y:
                return (SymBijection(frozenset()),)
            tx = next(iter(x))[0] if x else None
            ty = next(iter(y))[0] if y else None
            if tx != ty:
                return ()
            f = fa if tx == 0 else fb
            return tuple(SymBijection(_tag_pairs(tx, t)) for t in f.between(split(x, tx), split(y, tx)))
        return IsoFamily(es, between, name=nm)

    def payoff(x: frozenset) -> int:
        if not x:
            return 1
        t = next(iter(x))[0]
        return (a if t == 0 else b).kappa(split(x, t))

    return Game(
        es, fam(a.tilde, b.tilde, "tilde"), fam(a.neg, b.neg, "neg"), fam(a.pos, b.pos, "pos"),
        payoff, name=f"with({a.name},{b.name})", kind="with", parts=(a, b),
    )


def inj(tag: int, x: Iterable) -> frozenset:
    return _tag(tag, x)


# -- bounded exponential -----------------------------------------------------------


def copies(x: Iterable) -> dict:
    """Group a configuration of a bang by copy index."""
    out: dict = {}
    for i, a in x:
        out.setdefault(i, set()).add(a)
    return {i: frozenset(s) for i, s in out.items()}


def family_config(fam: Mapping) -> frozenset:
    """Inverse of :func:`copies`."""
    return frozenset((i, a) for i, xs in fam.items() for a in xs)


def _bang_between(f: IsoFamily, reindex: bool):
    def between(x: frozenset, y: frozenset) -> Iterator[SymBijection]:
        cx, cy = copies(x), copies(y)
        if len(cx) != len(cy):
            return
        src = sorted(cx)
        targets = [tuple(sorted(cy))] if not reindex else itertools.permutations(sorted(cy))
        for perm in targets:
            if not reindex and tuple(src) != perm:
                continue
            options = []
            for i, j in zip(src, perm):
                opts = f.between(cx[i], cy[j])
                if not opts:
                    break
                options.append([frozenset(((i, a), (j, b)) for a, b in t.pairs) for t in opts])
            else:
                for combo in itertools.product(*options):
                    yield SymBijection(frozenset().union(*combo))

    return between


def bang(g: Game, width: int) -> Game:
    """Width-bounded exponential: copies ``0 .. width-1`` of a negative game."""
    if width < 1:
        raise ValueError("bang width must be at least 1")
    if not g.is_negative():
        raise ValidationError(f"bang: {g.name} is not negative")
    evs = [(i, e) for i in range(width) for e in g.es.events]
    causes = [((i, u), (i, v)) for i in range(width) for u, v in g.es.cover]
    confl = [tuple((i, e) for e in p) for i in range(width) for p in g.es.conflict]
    pol = {(i, e): g.es.pol(e) for i in range(width) for e in g.es.events}
    es = EventStructure.build(evs, causes, confl, pol)
    payoff = None
    if g.payoff_fn is not None:
        def payoff(x: frozenset) -> int:
            v = 0
            for xs in copies(x).values():
                v = p_tensor(v, g.kappa(xs))
            return v
    return Game(
        es,
        IsoFamily(es, _bang_between(g.tilde, True), name="tilde"),
        IsoFamily(es, _bang_between(g.neg, True), name="neg"),
        IsoFamily(es, _bang_between(g.pos, False), name="pos"),
        payoff, name=f"bang[{width}]({g.name})", kind="bang", parts=(g,), width=width,
    )


# -- arrows ----------------------------------------------------------------------


def lolli(a: Game, b: Game) -> Game:
    """Linear arrow: one copy of ``a`` below each root of the strict ``b``."""
    if not b.is_strict():
        raise ValidationError(f"lolli: {b.name} is not strict")
    if not a.is_negative():
        raise ValidationError(f"lolli: {a.name} is not negative")
    roots = b.es.minimal_events()
    flip = {"+": "-", "-": "+", ".": "."}
    evs = [(1, e) for e in b.es.events] + [(0, r, e) for r in roots for e in a.es.events]
    causes = [((1, u), (1, v)) for u, v in b.es.cover]
    causes += [((0, r, u), (0, r, v)) for r in roots for u, v in a.es.cover]
    causes += [((1, r), (0, r, e)) for r in roots for e in a.es.minimal_events()]
    confl = [tuple((1, e) for e in p) for p in b.es.conflict]
    confl += [tuple((0, r, e) for e in p) for r in roots for p in a.es.conflict]
    pol = {(1, e): b.es.pol(e) for e in b.es.events}
    pol.update({(0, r, e): flip[a.es.pol(e)] for r in roots for e in a.es.events})
    es = EventStructure.build(evs, causes, confl, pol)

    def fam(fa: IsoFamily, fb: IsoFamily, nm: str) -> IsoFamily:
        def between(x: frozenset, y: frozenset) -> Iterator[SymBijection]:
            xa, xb = lolli_split(x)
            ya, yb = lolli_split(y)
            if not xb:
                if not yb:
                    yield SymBijection(frozenset())
                return
            rx, ry = lolli_root(x), lolli_root(y)
            la = fa.between(xa, ya)
            if not la:
                return
            for tb in fb.between(xb, yb):
                pb = _tag_pairs(1, tb)
                for ta in la:
                    yield SymBijection(pb | frozenset(((0, rx, u), (0, ry, v)) for u, v in ta.pairs))
        return IsoFamily(es, between, name=nm)

    payoff = None
    if a.payoff_fn is not None:
        def payoff(x: frozenset) -> int:
            xa, xb = lolli_split(x)
            return p_par(-a.kappa(xa), b.kappa(xb))

    return Game(
        es, fam(a.tilde, b.tilde, "tilde"), fam(a.pos, b.neg, "neg"), fam(a.neg, b.pos, "pos"),
        payoff, name=f"lolli({a.name},{b.name})", kind="lolli", parts=(a, b),
    )


def lolli_split(x: Iterable) -> tuple[frozenset, frozenset]:
    xa = frozenset(e[2] for e in x if e[0] == 0)
    xb = frozenset(e[1] for e in x if e[0] == 1)
    return xa, xb


def lolli_root(x: Iterable) -> object:
    """Root tag carried by the argument events of ``x`` (None if there are none)."""
    for e in x:
        if e[0] == 0:
            return e[1]
    return None


def lolli_config(g: Game, xa: Iterable, xb: Iterable) -> frozenset:
    """``xa ⊸ xb`` as a configuration of ``g = lolli(a, b)``."""
    xb = frozenset(xb)
    b = g.parts[1]
    if not xb:
        if xa:
            raise ValueError("argument moves need a result root")
        return frozenset()
    (r,) = [e for e in xb if not b.es.preds(e)]
    return frozenset((1, e) for e in xb) | frozenset((0, r, e) for e in xa)


def arrow(a: Game, b: Game, width: int) -> Game:
    g = lolli(bang(a, width), b)
    g.name = f"arrow[{width}]({a.name},{b.name})"
    return g


# -- validators --------------------------------------------------------------------


def validate_arena(g: Game) -> Report:
    rep = Report(f"arena {g.name}")
    es = g.es
    for e in es.events:
        if len(es.preds(e)) > 1:
            rep.add(f"{e!r} has incomparable causes {ssorted(es.preds(e))}")
    for u, v in es.cover:
        if es.pol(u) == es.pol(v):
            rep.add(f"{u!r} ↣ {v!r} does not alternate polarity")
    for e in es.events:
        if es.pol(e) not in "+-":
            rep.add(f"{e!r} has no polarity")
    return rep


def validate_board(g: Game, full: bool = True) -> Report:
    """Tcg axioms (if ``full``), invariance, race-freedom, initialization."""
    rep = Report(f"board {g.name}")
    if full:
        rep.extend(validate_tcg(g.tcg), prefix="[tcg] ")
    if g.payoff_fn is None:
        rep.add("no payoff function")
        return rep
    for x in g.es.configurations():
        v = g.kappa(x)
        if v not in (-1, 0, 1):
            rep.add(f"payoff {v} on {ssorted(x)} outside -1..1")
    for th in g.tilde:
        if g.kappa(th.dom) != g.kappa(th.cod):
            rep.add(f"payoff not invariant under {th!r}")
    for a, b in g.es.minimal_conflicts():
        if g.es.pol(a) != g.es.pol(b):
            rep.add(f"immediate conflict {a!r} ~ {b!r} between polarities")
    if g.is_negative() and g.kappa(frozenset()) < 0:
        rep.add("negative board with negative payoff on the empty configuration")
    return rep


def complete_configs(g: Game) -> list[frozenset]:
    return g.complete()


# -- text format ----------------------------------------------------------------------

_SYM_RE = re.compile(r"^sym\s+(\S+)\s*:\s*\{(.*)\}\s*$")
_PAYOFF_RE = re.compile(r"^payoff\s*\{(.*)\}\s*(-?\d+)\s*$")


def _parse_set(body: str, no: int) -> frozenset:
    body = body.strip()
    if not body:
        return frozenset()
    return frozenset(parse_id(t.strip(), no) for t in body.split(","))


def parse_game(text: str, name: str = "G") -> Game:
    """Event structure lines plus ``sym``, ``polarity-class`` and ``payoff`` lines."""
    es, rest = parse_es_lines(tokenize(text))
    raw_lines = text.splitlines()
    syms: dict = {}
    classes: dict = {}
    payoffs: list = []
    default = None
    for no, toks in rest:
        line = raw_lines[no - 1].split("#", 1)[0].strip()
        head = toks[0]
        if head == "sym":
            m = _SYM_RE.match(line)
            if not m:
                raise ParseError("expected: sym <name> : {a->b, ...}", no)
            pairs = []
            for item in filter(None, (t.strip() for t in m.group(2).split(","))):
                if "->" not in item:
                    raise ParseError(f"bad pair {item!r}", no)
                a, b = item.split("->")
                pairs.append((parse_id(a.strip(), no), parse_id(b.strip(), no)))
            syms[m.group(1)] = SymBijection.of(pairs)
        elif head == "polarity-class":
            if len(toks) != 3 or toks[2] not in ("neutral", "pos", "neg"):
                raise ParseError("expected: polarity-class <name> <neutral|pos|neg>", no)
            classes[toks[1]] = toks[2]
        elif head == "payoff":
            m = _PAYOFF_RE.match(line)
            if not m:
                raise ParseError("expected: payoff {ids} <-1|0|1>", no)
            payoffs.append((_parse_set(m.group(1), no), int(m.group(2)), no))
        elif head == "payoff-default":
            if len(toks) != 2:
                raise ParseError("expected: payoff-default <-1|0|1>", no)
            default = int(toks[1])
        else:
            raise ParseError(f"unknown directive {head!r}", no)
    for nm in classes:
        if nm not in syms:
            raise ParseError(f"polarity-class for unknown symmetry {nm!r}")
    tilde = close_family(es, syms.values(), name="tilde")
    neg = close_family(es, [s for n, s in syms.items() if classes.get(n) == "neg"], name="neg")
    pos = close_family(es, [s for n, s in syms.items() if classes.get(n) == "pos"], name="pos")
    payoff = None
    if payoffs or default is not None:
        table: dict = {}
        for x, v, no in payoffs:
            if not es.is_configuration(x):
                raise ParseError(f"payoff on a non-configuration {ssorted(x)}", no)
            for th in tilde.from_(x):
                table[th.cod] = v
        dflt = 0 if default is None else default

        def payoff(x: frozenset) -> int:
            return table.get(x, dflt)
    return Game(es, tilde, neg, pos, payoff, name=name)


def dump_game(g: Game) -> str:
    from .es import dump_es, numbering

    ids = numbering(g.es)
    out = [dump_es(g.es, ids).rstrip("\n")]
    if g.payoff_fn is not None:
        for x in g.es.configurations():
            body = ",".join(str(v) for v in sorted(ids[e] for e in x))
            out.append(f"payoff {{{body}}} {g.kappa(x)}")
    return "\n".join(out) + "\n"


# -- constructor expressions ---------------------------------------------------------

BUILTINS: dict[str, Callable[[], Game]] = {
    "o": o_board, "bool": bool_board, "qa": qa_board, "I": empty_board,
}

_TOKEN = re.compile(r"\s*([A-Za-z_][\w.\-/]*|\[|\]|\(|\)|,|\d+)")


def parse_game_expr(expr: str, loader: Callable[[str], Game] | None = None) -> Game:
    """Parse ``tensor(o, bang[2](bool))``-style expressions.

    Atoms are builtins (``o``, ``bool``, ``qa``, ``I``) or paths handled by ``loader``.
    """
    toks: list[str] = []
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m:
            raise ParseError(f"cannot tokenize game expression at {expr[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
    toks_iter = iter(toks + [""])
    cur = [next(toks_iter)]

    def peek() -> str:
        return cur[0]

    def take(expect: str | None = None) -> str:
        t = cur[0]
        if expect is not None and t != expect:
            raise ParseError(f"expected {expect!r}, got {t!r} in game expression")
        cur[0] = next(toks_iter)
        return t

    def node() -> Game:
        head = take()
        if not head or head in "[](),":
            raise ParseError(f"unexpected {head!r} in game expression")
        width = None
        if peek() == "[":
            take("[")
            w = take()
            if not w.isdigit():
                raise ParseError("width must be an integer")
            width = int(w)
            take("]")
        if peek() != "(":
            if head in BUILTINS:
                return BUILTINS[head]()
            if loader is None:
                raise ParseError(f"unknown game {head!r}")
            return loader(head)
        take("(")
        args = [node()]
        while peek() == ",":
            take(",")
            args.append(node())
        take(")")
        arity = {"dual": 1, "bang": 1, "tensor": 2, "par": 2, "hom": 2, "with": 2, "lolli": 2, "arrow": 2}
        if head not in arity:
            raise ParseError(f"unknown constructor {head!r}")
        if len(args) != arity[head]:
            raise ParseError(f"{head} takes {arity[head]} argument(s)")
        if head in ("bang", "arrow") and width is None:
            raise ParseError(f"{head} needs a width, e.g. {head}[2](...)")
        if head == "dual":
            return dual(args[0])
        if head == "bang":
            return bang(args[0], width)
        if head == "arrow":
            return arrow(args[0], args[1], width)
        fn = {"tensor": tensor, "par": par, "hom": hom, "with": with_product, "lolli": lolli}[head]
        return fn(*args)

    g = node()
    if peek():
        raise ParseError(f"trailing input {peek()!r} in game expression")
    return g


def load_game(expr: str, base: Path | None = None) -> Game:
    """A game from an expression whose atoms may be ``.game`` files."""

    def loader(atom: str) -> Game:
        p = Path(atom)
        if base is not None and not p.is_absolute():
            p = base / p
        if not p.exists():
            raise ParseError(f"unknown game {atom!r}")
        return parse_game(p.read_text(), name=p.stem)

    return parse_game_expr(expr, loader)
