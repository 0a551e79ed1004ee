"""Reference answers: split-graph max flow and brute-force cuts."""

from __future__ import annotations

from itertools import product

from .flow import Flow, FlowNetwork, flow_value
from .gadgets import build_split, restrict
from .maxflow import max_flow
from .scalars import INF, Number, exact


def oracle_maxflow(G: FlowNetwork) -> tuple[Number, Flow]:
    """Maximum feasible flow via vertex splitting and one generic max flow."""
    bar, smap = build_split(G)
    fb = max_flow(bar)
    return flow_value(bar, fb), restrict(fb, smap)


def min_cut_bruteforce(net: FlowNetwork, limit: int = 16) -> Number:
    """Minimum arc cut separating sources from sinks (vertex caps ignored).

    Enumerates every side assignment of the non-terminal vertices, so
    only use it on tiny graphs.
    """
    g = net.graph
    free = [v for v in range(g.n) if v not in net.terminals]
    if len(free) > limit:
        raise ValueError(f"{len(free)} free vertices is too many to enumerate")
    best: Number = INF
    for sides in product((0, 1), repeat=len(free)):
        side = [0] * g.n
        for t in net.sinks:
            side[t] = 1
        for v, s in zip(free, sides):
            side[v] = s
        total: Number = 0
        for d in range(g.dart_count):
            if side[g.dart_tails[d]] == 0 and side[g.dart_heads[d]] == 1:
                total += net.cap[d]
        if total < best:
            best = total
    return exact(best) if best != INF else best


def vertex_cut_bruteforce(G: FlowNetwork, limit: int = 12) -> Number:
    """Minimum cut of the split graph by enumeration; equals the maximum
    feasible flow value of ``G``."""
    bar, _ = build_split(G)
    return min_cut_bruteforce(bar, limit)
