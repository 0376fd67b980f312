"""Single-sender solver: pruning, the exact codelength, and cyclic codes.

The optimal codelength is total weight, minus the weight of leaf
vertices (nobody wants those messages), minus one minimum weight per
leaf SCC (the cyclic-code saving).  Pruning realizes the same number as
a predecessor bound on a grounded graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import CodeSymbol, LinearIndexCode
from .graph import WorkGraph, leaf_scc_sets, leaf_vertices
from .instance import Instance


class NotSingleSenderError(ValueError):
    """solve_single only handles one sender; use the multi-sender bounds."""


@dataclass(frozen=True)
class PruneStep:
    scc: frozenset[int]
    vertex: int
    removed_arcs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class PruneTrace:
    steps: tuple[PruneStep, ...]


@dataclass(frozen=True)
class SingleSolution:
    optimal_length: int
    lower_bound: int
    code: LinearIndexCode
    trace: PruneTrace


def prune_all(g: WorkGraph) -> tuple[WorkGraph, PruneTrace]:
    """Ground the graph: in each leaf SCC, remove all out-arcs of one
    minimum-weight vertex (smallest id on ties)."""
    if g.dummies:
        raise ValueError("prune_all expects a graph without dummy vertices")
    steps = []
    while True:
        leafs = leaf_scc_sets(g)
        if not leafs:
            break
        scc = leafs[0]
        pick = min(scc, key=lambda v: (g.weight[v], v))
        removed = tuple(sorted((i, j) for (i, j) in g.arcs if i == pick))
        g = g.without_out_arcs(pick)
        steps.append(PruneStep(scc=scc, vertex=pick, removed_arcs=removed))
    return g, PruneTrace(steps=tuple(steps))


def lower_bound_single(g: WorkGraph) -> int:
    total = sum(g.weight[v] for v in g.vertices)
    leaf_w = sum(g.weight[v] for v in leaf_vertices(g))
    scc_min = sum(min(g.weight[v] for v in scc) for scc in leaf_scc_sets(g))
    return total - leaf_w - scc_min


def encode_single(g: WorkGraph) -> LinearIndexCode:
    """Cyclic code per leaf SCC, everything else non-leaf sent uncoded.

    Per leaf SCC with vertices v_1 < ... < v_k and minimum length q_min:
    first the XOR chain x_{v_t}[b] ^ x_{v_{t+1}}[b] for t = 1..k-1, bits
    inner; then the SCC messages' bits beyond q_min uncoded, ascending
    (vertex, bit).  Then all non-leaf vertices outside leaf SCCs,
    uncoded ascending.  Leaf messages are never transmitted.
    """
    symbols: list[CodeSymbol] = []
    in_scc: set[int] = set()
    for scc in leaf_scc_sets(g):
        vs = sorted(scc)
        in_scc |= scc
        q_min = min(g.weight[v] for v in vs)
        for t in range(len(vs) - 1):
            for b in range(1, q_min + 1):
                symbols.append(CodeSymbol(sender=1, terms=((vs[t], b), (vs[t + 1], b))))
        for v in vs:
            for b in range(q_min + 1, g.weight[v] + 1):
                symbols.append(CodeSymbol(sender=1, terms=((v, b),)))
    leaves = leaf_vertices(g)
    for v in g.vertices:
        if v in in_scc or v in leaves:
            continue
        for b in range(1, g.weight[v] + 1):
            symbols.append(CodeSymbol(sender=1, terms=((v, b),)))
    return LinearIndexCode(symbols=tuple(symbols))


def solve_single(inst: Instance) -> SingleSolution:
    """Exact optimum for a one-sender instance: the pruning bound is
    achieved by the cyclic-code construction, so lower bound, codelength
    and optimum coincide."""
    if len(inst.senders) != 1:
        raise NotSingleSenderError(
            f"instance has {len(inst.senders)} senders; this solver handles exactly one")
    g = WorkGraph.from_instance(inst)
    bound = lower_bound_single(g)
    code = encode_single(g)
    _, trace = prune_all(g)
    return SingleSolution(optimal_length=bound, lower_bound=bound, code=code, trace=trace)


def solve_arithmetic(g: WorkGraph) -> tuple[int, int, int, int]:
    """The three terms of the codelength formula plus the result, for
    display: total - leaf weight - per-SCC minimum sum."""
    total = sum(g.weight[v] for v in g.vertices)
    leaf_w = sum(g.weight[v] for v in leaf_vertices(g))
    scc_min = sum(min(g.weight[v] for v in scc) for scc in leaf_scc_sets(g))
    return total, leaf_w, scc_min, total - leaf_w - scc_min


__all__ = [
    "NotSingleSenderError", "PruneStep", "PruneTrace", "SingleSolution",
    "prune_all", "lower_bound_single", "encode_single", "solve_single",
    "solve_arithmetic",
]
