"""Untyped λ-terms with named variables.

Concrete syntax: ``\\x. M`` (or ``λx. M``, several binders allowed as in
``\\x y. M``), left-associative application by juxtaposition, parentheses.
Identifiers are letters, digits, ``_`` and ``'`` starting with a letter.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable

from ..es import ParseError


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    var: str
    body: "Term"


Term = Var | App | Lam

_TOKEN = re.compile(r"\s*(?:(?P<lam>\\|λ)|(?P<id>[A-Za-z][A-Za-z0-9_']*)|(?P<sym>[.()]))")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at offset {pos}")
        out.append("\\" if m.group("lam") else m.group("id") or m.group("sym"))
        pos = m.end()
    return out


def parse_term(text: str, free: Iterable[str] | None = None) -> Term:
    """Parse ``text``; with ``free`` given, any other free variable is an error."""
    toks = _tokens(text)
    pos = 0

    def peek() -> str | None:
        return toks[pos] if pos < len(toks) else None

    def take(expect: str | None = None) -> str:
        nonlocal pos
        tok = peek()
        if tok is None or (expect is not None and tok != expect):
            raise ParseError(f"expected {expect or 'a token'}, found {tok or 'end of input'}")
        pos += 1
        return tok

    def is_ident(tok: str | None) -> bool:
        return tok is not None and tok not in ("\\", ".", "(", ")")

    def term() -> Term:
        if peek() == "\\":
            take()
            names = []
            while is_ident(peek()):
                names.append(take())
            if not names:
                raise ParseError("λ needs at least one variable")
            take(".")
            body = term()
            for n in reversed(names):
                body = Lam(n, body)
            return body
        head = atom()
        while True:
            tok = peek()
            if tok == "\\":
                return App(head, term())
            if tok == "(" or is_ident(tok):
                head = App(head, atom())
            else:
                return head

    def atom() -> Term:
        tok = peek()
        if tok == "(":
            take()
            t = term()
            take(")")
            return t
        if is_ident(tok):
            return Var(take())
        raise ParseError(f"expected a term, found {tok or 'end of input'}")

    t = term()
    if peek() is not None:
        raise ParseError(f"trailing input {peek()!r}")
    if free is not None:
        unbound = [v for v in free_vars(t) if v not in set(free)]
        if unbound:
            raise ParseError(f"unbound variable(s): {', '.join(unbound)}")
    return t


def show(t: Term) -> str:
    """Canonical text; ``parse_term(show(t)) == t``."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Lam):
        return f"\\{t.var}. {show(t.body)}"
    fun = show(t.fun) if not isinstance(t.fun, Lam) else f"({show(t.fun)})"
    arg = show(t.arg) if isinstance(t.arg, Var) else f"({show(t.arg)})"
    return f"{fun} {arg}"


def free_vars(t: Term) -> list[str]:
    """Free variables in order of first occurrence."""
    out: list[str] = []

    def go(u: Term, bound: frozenset) -> None:
        if isinstance(u, Var):
            if u.name not in bound and u.name not in out:
                out.append(u.name)
        elif isinstance(u, App):
            go(u.fun, bound)
            go(u.arg, bound)
        else:
            go(u.body, bound | {u.var})

    go(t, frozenset())
    return out


def _all_names(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return _all_names(t.fun) | _all_names(t.arg)
    return {t.var} | _all_names(t.body)


def fresh(avoid: Iterable[str], base: str = "v") -> str:
    avoid = set(avoid)
    for i in itertools.count():
        name = f"{base}{i}"
        if name not in avoid:
            return name
    raise AssertionError("unreachable")


def subst(t: Term, name: str, value: Term) -> Term:
    """Capture-avoiding ``t[value/name]``."""
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, App):
        return App(subst(t.fun, name, value), subst(t.arg, name, value))
    if t.var == name:
        return t
    fv = set(free_vars(value))
    if t.var in fv and name in free_vars(t.body):
        new = fresh(fv | _all_names(t.body) | {name}, t.var.rstrip("0123456789") or "v")
        return Lam(new, subst(subst(t.body, t.var, Var(new)), name, value))
    return Lam(t.var, subst(t.body, name, value))


def alpha_equal(s: Term, t: Term) -> bool:
    def go(a: Term, b: Term, env_a: dict, env_b: dict, depth: int) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            ia, ib = env_a.get(a.name), env_b.get(b.name)
            return ia == ib and (ia is not None or a.name == b.name)
        if isinstance(a, App) and isinstance(b, App):
            return go(a.fun, b.fun, env_a, env_b, depth) and go(a.arg, b.arg, env_a, env_b, depth)
        if isinstance(a, Lam) and isinstance(b, Lam):
            return go(a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1)
        return False

    return go(s, t, {}, {}, 0)


# -- reduction ----------------------------------------------------------------------------


def spine(t: Term) -> tuple[Term, list[Term]]:
    """``h N1 … Nk`` as ``(h, [N1, …, Nk])``."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, args[::-1]


def _head_step(t: Term) -> Term | None:
    """One leftmost-outermost step towards head normal form, or None if in hnf."""
    if isinstance(t, Lam):
        body = _head_step(t.body)
        return None if body is None else Lam(t.var, body)
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return subst(t.fun.body, t.fun.var, t.arg)
        fun = _head_step(t.fun)
        return None if fun is None else App(fun, t.arg)
    return None


def head_normal_form(t: Term, fuel: int = 1000) -> Term | None:
    """The head normal form, or None when ``fuel`` head steps do not reach one."""
    for _ in range(fuel):
        nxt = _head_step(t)
        if nxt is None:
            return t
        t = nxt
    return None


def normal_form(t: Term, fuel: int = 1000) -> Term | None:
    """The β-normal form by normal-order reduction, or None when fuel runs out."""
    budget = [fuel]

    def go(u: Term) -> Term | None:
        h = head_normal_form(u, budget[0])
        if h is None:
            return None
        binders = []
        while isinstance(h, Lam):
            binders.append(h.var)
            h = h.body
        head, args = spine(h)
        budget[0] -= 1
        if budget[0] < 0:
            return None
        out = head
        for a in args:
            na = go(a)
            if na is None:
                return None
            out = App(out, na)
        for v in reversed(binders):
            out = Lam(v, out)
        return out

    return go(t)


def beta_step(t: Term) -> Term | None:
    """One normal-order step, or None if ``t`` is normal."""
    if isinstance(t, App) and isinstance(t.fun, Lam):
        return subst(t.fun.body, t.fun.var, t.arg)
    if isinstance(t, Lam):
        b = beta_step(t.body)
        return None if b is None else Lam(t.var, b)
    if isinstance(t, App):
        f = beta_step(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = beta_step(t.arg)
        return None if a is None else App(t.fun, a)
    return None


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    return 1 + size(t.body)
