"""λ-terms as strategies on the truncated universal arena.

The strategy of a term is read off its lazily computed Böhm tree, η-expanded
on the fly.  An Opponent move ``n`` (the root of some copy of ``U``) asks for
the head normal form ``λx₁…x_p. y N₁ … N_q`` of the term sitting at ``n``:

* ``x_i`` is bound to slot ``i`` of ``n``; further slots bind η-variables;
* Player answers by calling ``y``: a move in a slot of ``y``'s binder, or in
  the context for a free variable;
* Opponent may then ask for argument ``l`` of that call (any copy), which is
  ``N_{l+1}`` when ``l < q`` and the η-variable of slot ``p + l - q`` of ``n``
  otherwise.

Opponent moves are identified by the sequence of ``(argument, copy)`` choices
leading to them.  Several calls to the same slot need different copies: the
copy is the rank of the calling move in length-lexicographic order of these
sequences, counted from the binder.  A call ranked past the width has no
room in the truncated game and is left out.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..collapse import collapse_strategy
from ..es import EventStructure
from ..strategies import Strategy
from ..util import TruncationError
from . import itypes as T
from .terms import Lam, Term, Var, free_vars, head_normal_form, parse_term, spine, subst
from .universal import address_event, shape, term_game, type_paths

SLOT = "#"


def extend_shape(shp: tuple, slot: int) -> tuple:
    return shp[:-1] + (shp[-1] + (slot,),)


def extend_address(addr: tuple, step: tuple) -> tuple:
    return addr[:-1] + (addr[-1] + (step,),)


@dataclass
class Node:
    """An Opponent move of the virtual (copy-free) Böhm tree."""

    key: tuple
    level: int
    shape: tuple
    term: Term
    arity: int = 0
    head: tuple | None = None
    args: tuple = ()
    body_vars: frozenset = frozenset()
    call_level: int = -1
    call_shape: tuple | None = None


@dataclass
class Interpretation:
    """The strategy of ``term`` on ``term_game(len(names), level, width)``.

    With ``shapes`` given, only moves whose copy-free address occurs there
    are generated (enough for witnesses at a point with those shapes).
    """

    term: Term
    names: tuple
    level: int
    width: int
    shapes: frozenset | None = None
    fuel: int = 2000
    budget: int = 200000
    nodes: dict = field(default_factory=dict)
    _slot_ids: dict = field(default_factory=dict)
    _slots: dict = field(default_factory=dict)
    _instances: dict = field(default_factory=dict)

    def __post_init__(self):
        self.nvars = len(self.names)
        self.game = term_game(self.nvars, self.level, self.width)

    # -- the virtual tree ----------------------------------------------------------------

    def slot_name(self, key: tuple, i: int) -> str:
        idx = self._slot_ids.setdefault(key, len(self._slot_ids))
        name = f"{SLOT}{idx}.{i}"
        self._slots[name] = (key, i)
        return name

    def allowed(self, shp: tuple) -> bool:
        return self.shapes is None or shp in self.shapes

    def node(self, key: tuple) -> Node | None:
        hit = self.nodes.get(key, False)
        if hit is not False:
            return hit
        if len(self.nodes) >= self.budget:
            raise TruncationError(f"more than {self.budget} Opponent moves explored")
        if not key:
            n = Node((), self.level, ("res", ()), self.term)
        else:
            parent = self.node(key[:-1])
            l, _ = key[-1]
            if l < len(parent.args):
                t = parent.args[l]
            else:
                t = Var(self.slot_name(parent.key, parent.arity + l - len(parent.args)))
            n = Node(key, parent.call_level - 1, extend_shape(parent.call_shape, l), t)
        self._evaluate(n)
        self.nodes[key] = n
        return n

    def _evaluate(self, n: Node) -> None:
        h = head_normal_form(n.term, self.fuel)
        if h is None:
            return
        i = 0
        while isinstance(h, Lam):
            h = subst(h.body, h.var, Var(self.slot_name(n.key, i)))
            i += 1
        n.arity = i
        head, args = spine(h)
        n.args = tuple(args)
        n.body_vars = frozenset(free_vars(h))
        if head.name in self._slots:
            bkey, slot = self._slots[head.name]
            binder = self.nodes[bkey] if bkey != n.key else n
            if slot >= self.width or binder.level < 1:
                return
            n.head = ("slot", bkey, slot)
            n.call_level = binder.level - 1
            n.call_shape = extend_shape(binder.shape, slot)
        else:
            v = self.names.index(head.name)
            n.head = ("ctx", v)
            n.call_level = self.level
            n.call_shape = ("ctx", v, ())
        if not self.allowed(n.call_shape):
            n.head = None

    def children(self, n: Node) -> list[tuple]:
        if n.head is None or n.call_level < 1:
            return []
        out = []
        for l in range(self.width):
            if self.allowed(extend_shape(n.call_shape, l)):
                out.extend(n.key + ((l, k),) for k in range(self.width))
        return out

    def _may_call(self, n: Node, target: tuple) -> bool:
        """Whether some move at or below ``n`` may call ``target``."""
        if target[0] == "ctx":
            return self.names[target[1]] in n.body_vars
        _, bkey, slot = target
        if bkey == n.key:
            return slot >= n.arity or self.slot_name(bkey, slot) in n.body_vars
        return self.slot_name(bkey, slot) in n.body_vars

    def instances(self, target: tuple) -> list[tuple]:
        """The first ``width`` calls of ``target`` in length-lexicographic order."""
        hit = self._instances.get(target)
        if hit is not None:
            return hit
        start = () if target[0] == "ctx" else target[1]
        found: list = []
        queue = deque([start])
        while queue and len(found) < self.width:
            key = queue.popleft()
            n = self.node(key)
            if not self._may_call(n, target):
                continue
            if n.head == target:
                found.append(key)
            queue.extend(self.children(n))
        self._instances[target] = found
        return found

    # -- the strategy ---------------------------------------------------------------------

    def strategy(self, name: str | None = None) -> Strategy:
        events: dict = {}
        causes: list = []
        root = ("res", ())
        address = {(): root}
        events[address_event(root, self.nvars, self.level)] = "-"
        queue = deque([()])
        while queue:
            key = queue.popleft()
            n = self.node(key)
            if n.head is None:
                continue
            found = self.instances(n.head)
            if key not in found:
                continue
            copy = found.index(key)
            if n.head[0] == "ctx":
                call = ("ctx", n.head[1], copy, ())
            else:
                call = extend_address(address[n.head[1]], (n.head[2], copy))
            ce = address_event(call, self.nvars, self.level)
            events[ce] = self.game.es.pol(ce)
            causes.append((address_event(address[key], self.nvars, self.level), ce))
            for child in self.children(n):
                l, k = child[-1]
                addr = extend_address(call, (l, k))
                address[child] = addr
                ev = address_event(addr, self.nvars, self.level)
                events[ev] = self.game.es.pol(ev)
                causes.append((ce, ev))
                queue.append(child)
        for e in events:
            for p in self.game.es.preds(e):
                if p not in events:
                    raise AssertionError(f"missing game cause {p!r} of {e!r}")
                causes.append((p, e))
        es = EventStructure.build(sorted(events, key=repr), set(causes), (), events)
        label = name or f"[{self.term}]"
        return Strategy(es, self.game, {e: e for e in es.events}, name=label)


def _as_term(term: Term | str, names: Sequence[str]) -> Term:
    return parse_term(term, free=names) if isinstance(term, str) else term


def interpret(term: Term | str, names: Sequence[str], level: int, width: int,
              shapes: Iterable[tuple] | None = None) -> Strategy:
    """The strategy of ``term`` with free variables ``names`` on U at the given truncation."""
    t = _as_term(term, names)
    interp = Interpretation(t, tuple(names), level, width, None if shapes is None else frozenset(shapes))
    return interp.strategy()


# -- points -------------------------------------------------------------------------------------


def point_addresses(ctx: Sequence[tuple], typ: T.IType) -> list[tuple]:
    out = [("res", p) for p in type_paths(typ)]
    for v, seq in enumerate(ctx):
        for j, a in enumerate(seq):
            out.extend(("ctx", v, j, p) for p in type_paths(a))
    return out


def point_configs(ctx: Sequence[tuple], typ: T.IType, level: int, width: int) -> tuple[frozenset, frozenset]:
    """``(R(δ), R(a))`` as configurations of the context game and of U."""
    from .universal import fits

    nvars = len(ctx)
    for a in [typ] + [b for s in ctx for b in s]:
        if not fits(a, level, width):
            raise TruncationError(f"{T.show_type(a)} does not fit U at level {level}, width {width}")
    if any(len(s) > width for s in ctx):
        raise TruncationError(f"a context sequence is longer than the width {width}")
    xa, xb = set(), set()
    for addr in point_addresses(ctx, typ):
        e = address_event(addr, nvars, level)
        (xb if e[0] == 1 else xa).add(e[1])
    return frozenset(xa), frozenset(xb)


@dataclass
class GameSide:
    strategy: Strategy
    collapsed: object
    xa: frozenset
    xb: frozenset
    witnesses: tuple

    @property
    def count(self) -> int:
        return len(self.witnesses)


def game_witnesses(term: Term | str, names: Sequence[str], ctx: Sequence[tuple], typ: T.IType,
                   level: int, width: int, prune: bool = True) -> GameSide:
    """Positive witnesses of the collapsed strategy at ``(R(δ), R(a))``.

    With ``prune`` the strategy only contains moves whose shape occurs in the
    point.  It is then not receptive, but every +-covered configuration
    displayed inside the point survives, so the witnesses are the same.
    """
    t = _as_term(term, names)
    ctx = tuple(tuple(s) for s in ctx)
    if len(ctx) != len(names):
        raise ValueError("one type sequence per variable is required")
    xa, xb = point_configs(ctx, typ, level, width)
    shapes = {shape(a) for a in point_addresses(ctx, typ)} if prune else None
    sigma = interpret(t, names, level, width, shapes)
    d = collapse_strategy(sigma, max_size=len(xa) + len(xb))
    return GameSide(sigma, d, xa, xb, d.at(xa, xb))
