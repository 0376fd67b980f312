"""Leaf-SCC classification by message-graph connectivity.

A leaf SCC is message-connected (connected inside itself on the message
graph), message-disconnected (some pair unreachable even through the
whole message graph), or semi.  A semi leaf SCC is degenerated when a
witness (s_inside, s_outside) certifies it can be appended without
raising the optimal codelength, and non-degenerated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import WorkGraph, leaf_scc_sets, leaf_vertices, predecessors
from .instance import MessageGraph


class Kind(str, Enum):
    MESSAGE_CONNECTED = "MessageConnected"
    MESSAGE_DISCONNECTED = "MessageDisconnected"
    DEGENERATED = "Degenerated"
    NON_DEGENERATED = "NonDegenerated"


@dataclass(frozen=True)
class DegeneracyWitness:
    s_inside: frozenset[int]
    s_outside: frozenset[int]
    v_inside: int
    target: int


@dataclass(frozen=True)
class LeafSccClass:
    kind: Kind
    disconnected_pair: tuple[int, int] | None = None
    degeneracy: DegeneracyWitness | None = None


def _require_leaf_scc(g: WorkGraph, scc: frozenset[int]) -> None:
    if scc not in leaf_scc_sets(g):
        raise ValueError(f"{sorted(scc)} is not a leaf SCC of the graph")


def _u_components_within(u: MessageGraph, scc: frozenset[int]) -> list[frozenset[int]]:
    """Connected components of the message graph restricted to scc,
    ordered by smallest vertex."""
    left = set(scc)
    comps = []
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in u.neighbors(v):
                if w in left and w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


def check_degeneracy_witness(g: WorkGraph, u: MessageGraph, scc: frozenset[int],
                             w: DegeneracyWitness) -> bool:
    """The three witness conditions, checked directly from g and u."""
    if not w.s_inside or not w.s_inside < scc:
        return False
    if w.s_outside & scc:
        return False
    if w.v_inside not in w.s_inside or w.target not in w.s_outside:
        return False
    # (a) no message-graph edge between s_inside and the rest of the SCC
    rest = scc - w.s_inside
    for a in w.s_inside:
        if u.neighbors(a) & rest:
            return False
    # (b) at most one non-leaf vertex outside
    leaves = leaf_vertices(g)
    if sum(1 for v in w.s_outside if v not in leaves) > 1:
        return False
    # (c) every neighbor of s_inside is in s_outside or precedes one of it
    covered = set(w.s_outside)
    for v in w.s_outside:
        covered |= predecessors(g, v)
    return u.neighbors_of_set(w.s_inside) <= covered


def find_degeneracy_witness(g: WorkGraph, u: MessageGraph,
                            scc: frozenset[int]) -> DegeneracyWitness | None:
    """Canonical witness search.

    Any valid s_inside is a union of connected components of the message
    graph restricted to the SCC, and if a union works then each member
    component works with the same s_outside, so trying single components
    is complete.  The canonical s_outside is every leaf outside the SCC
    plus at most one non-leaf; enlarging s_outside only helps, so this
    is complete too.  Dummy vertices are left out of witnesses: their
    correctness argument is the disconnected-append one, not this one.

    Callers must ensure the SCC is semi; that precondition is not
    re-derived here.
    """
    leaves = leaf_vertices(g)
    outside_leaves = frozenset(v for v in leaves if v not in scc and v not in g.dummies)
    non_leaves_outside = sorted(v for v in g.vertices
                                if v not in scc and v not in leaves and v not in g.dummies)
    for comp in _u_components_within(u, scc):
        if comp == scc:
            continue  # s_inside must be a proper subset
        nbrs = u.neighbors_of_set(comp)
        if nbrs & scc:
            continue  # a message edge crosses to the rest of the SCC
        base_cover = set(outside_leaves)
        for v in outside_leaves:
            base_cover |= predecessors(g, v)
        for w in [None, *non_leaves_outside]:
            s_outside = outside_leaves if w is None else outside_leaves | {w}
            if not s_outside:
                continue
            cover = base_cover if w is None else base_cover | {w} | predecessors(g, w)
            if nbrs <= cover:
                target = w if w is not None else min(s_outside)
                return DegeneracyWitness(s_inside=comp, s_outside=frozenset(s_outside),
                                         v_inside=min(comp), target=target)
    return None


def classify_leaf_scc(g: WorkGraph, u: MessageGraph, scc: frozenset[int]) -> LeafSccClass:
    """Exactly one kind per leaf SCC; disconnection takes precedence over
    degeneracy, matching the definition of a semi leaf SCC."""
    _require_leaf_scc(g, scc)
    if u.connected_within(scc):
        return LeafSccClass(kind=Kind.MESSAGE_CONNECTED)
    comp_of: dict[int, int] = {}
    for k, comp in enumerate(u.components()):
        for v in comp:
            comp_of[v] = k
    vs = sorted(scc)
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            if comp_of[vs[a]] != comp_of[vs[b]]:
                return LeafSccClass(kind=Kind.MESSAGE_DISCONNECTED,
                                    disconnected_pair=(vs[a], vs[b]))
    witness = find_degeneracy_witness(g, u, scc)
    if witness is not None:
        return LeafSccClass(kind=Kind.DEGENERATED, degeneracy=witness)
    return LeafSccClass(kind=Kind.NON_DEGENERATED)
