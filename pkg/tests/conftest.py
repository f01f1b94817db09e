from __future__ import annotations

import networkx as nx
from hypothesis import strategies as st

from gamecollapse.es import EventStructure
from gamecollapse.util import ValidationError


@st.composite
def event_structures(draw, max_events: int = 7):
    """Random small event structures (ints as ids, random polarities)."""
    n = draw(st.integers(0, max_events))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    causes = [p for p in pairs if draw(st.booleans()) and draw(st.booleans())]
    conflicts = [p for p in pairs if draw(st.integers(0, 5)) == 0]
    pol = {i: draw(st.sampled_from("+-")) for i in range(n)}
    try:
        return EventStructure.build(range(n), causes, conflicts, pol)
    except ValidationError:
        # a conflict below a common successor: drop conflicts instead
        return EventStructure.build(range(n), causes, [], pol)


def brute_configurations(es: EventStructure) -> set[frozenset]:
    """Oracle: filter the powerset using networkx ancestors for causality."""
    g = nx.DiGraph()
    g.add_nodes_from(es.events)
    g.add_edges_from(es.cover)
    anc = {e: nx.ancestors(g, e) for e in es.events}
    evs = list(es.events)
    out = set()
    for mask in range(1 << len(evs)):
        x = frozenset(evs[i] for i in range(len(evs)) if mask >> i & 1)
        if all(anc[e] <= x for e in x) and not any(es.in_conflict(a, b) for a in x for b in x):
            out.add(x)
    return out
