"""The λ-calculus layer: terms, intersection types, derivations and the universal arena.

* :mod:`.terms`: untyped λ-terms, parsing and reduction;
* :mod:`.itypes`: the type graphs D and D* and their isomorphisms;
* :mod:`.derivations`: typing derivations, their actions and congruence classes;
* :mod:`.universal`: the truncated arena U and its translation to D*;
* :mod:`.interp`: terms as strategies on U, and witness counting;
* :mod:`.correspond`: derivation classes against game witnesses.
"""

from __future__ import annotations

from .correspond import beta_invariance, correspond, correspondence_check
from .derivations import enumerate_derivations, itd, parse_point, show_point
from .interp import game_witnesses, interpret
from .itypes import parse_seq, parse_type, show_seq, show_type
from .terms import parse_term, show
from .universal import equivalence_check, term_game, to_config, to_type, u_game

__all__ = [
    "beta_invariance",
    "correspond",
    "correspondence_check",
    "enumerate_derivations",
    "equivalence_check",
    "game_witnesses",
    "interpret",
    "itd",
    "parse_point",
    "parse_seq",
    "parse_term",
    "parse_type",
    "show",
    "show_point",
    "show_seq",
    "show_type",
    "term_game",
    "to_config",
    "to_type",
    "u_game",
]
