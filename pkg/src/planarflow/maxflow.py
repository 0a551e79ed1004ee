"""Exact maximum flow over dart pairs.

One engine (Dinic: breadth-first levels, blocking flows by iterative
depth-first search) serves every max-flow call in the package.  Sources
and sinks hang off a virtual super source and super sink, so the same
code covers multi-terminal, fixed-value and supply/demand problems.
Pivot order is dart order, so results are deterministic.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping, Sequence

from .embedding import Embedding
from .errors import Infeasible, UnboundedFlow
from .flow import Flow, FlowNetwork, flow_value, residual, residual_capacities
from .scalars import INF, Number, exact, is_inf


def _dinic(
    node_count: int,
    tails: Sequence[int],
    heads: Sequence[int],
    cap: Sequence[Number],
    src: int,
    snk: int,
) -> list[Number]:
    """Return the signed net flow per edge of a maximum src-snk flow."""
    m = len(tails)
    net: list[Number] = [0] * m
    out: list[list[int]] = [[] for _ in range(node_count)]
    dhead = [0] * (2 * m)
    for e in range(m):
        out[tails[e]].append(2 * e)
        out[heads[e]].append(2 * e + 1)
        dhead[2 * e] = heads[e]
        dhead[2 * e + 1] = tails[e]
    for lst in out:
        lst.sort()

    def res(d: int) -> Number:
        x = net[d >> 1]
        return cap[d] - x if not d & 1 else cap[d] + x

    while True:
        level = [-1] * node_count
        level[src] = 0
        q = deque([src])
        while q:
            u = q.popleft()
            for d in out[u]:
                w = dhead[d]
                if level[w] < 0 and res(d) > 0:
                    level[w] = level[u] + 1
                    q.append(w)
        if level[snk] < 0:
            return net
        ptr = [0] * node_count
        path: list[int] = []
        u = src
        while True:
            if u == snk:
                b = min(res(d) for d in path)
                if is_inf(b):
                    raise UnboundedFlow("a source reaches a sink along infinite-capacity arcs")
                cut = None
                for i, d in enumerate(path):
                    if d & 1:
                        net[d >> 1] -= b
                    else:
                        net[d >> 1] += b
                    if cut is None and res(d) == 0:
                        cut = i
                del path[cut:]
                u = dhead[path[-1]] if path else src
                continue
            lst = out[u]
            i = ptr[u]
            while i < len(lst):
                d = lst[i]
                if level[dhead[d]] == level[u] + 1 and res(d) > 0:
                    break
                i += 1
            ptr[u] = i
            if i < len(lst):
                d = lst[i]
                path.append(d)
                u = dhead[d]
                continue
            if not path:
                break
            level[u] = -1
            d = path.pop()
            u = dhead[d ^ 1]
            ptr[u] += 1


def route(
    graph: Embedding,
    cap: Sequence[Number],
    supplies: Mapping[int, Number],
    demands: Mapping[int, Number],
    limit: Number = INF,
) -> tuple[Flow, Number]:
    """Max flow from supply vertices to demand vertices through capped stubs.

    Vertex ``v`` in ``supplies`` gets a stub of capacity ``supplies[v]``
    from the super source (likewise for demands).  ``limit`` caps the
    total.  Returns the flow restricted to ``graph`` and its value.
    """
    n = graph.n
    sigma, tau = n, n + 1
    tails = list(graph.tails)
    heads = list(graph.heads)
    caps = list(cap)
    top = sigma
    if not is_inf(limit):
        top = n + 2
        tails.append(top)
        heads.append(sigma)
        caps.extend((limit, 0))
    for v in sorted(supplies):
        tails.append(sigma)
        heads.append(v)
        caps.extend((supplies[v], 0))
    for v in sorted(demands):
        tails.append(v)
        heads.append(tau)
        caps.extend((demands[v], 0))
    node_count = n + 3
    net = _dinic(node_count, tails, heads, caps, top, tau)
    first = graph.m
    if is_inf(limit):
        value = sum(net[first:first + len(supplies)], 0)
    else:
        value = net[first]
    return Flow(tuple(exact(x) for x in net[:graph.m])), exact(value)


def route_demands(
    graph: Embedding,
    cap: Sequence[Number],
    supplies: Mapping[int, Number],
    demands: Mapping[int, Number],
) -> Flow:
    """Flow that sends exactly ``supplies`` and absorbs exactly ``demands``.

    Raises :class:`Infeasible` when the stubs cannot all be saturated.
    """
    supplies = {v: a for v, a in supplies.items() if a}
    demands = {v: a for v, a in demands.items() if a}
    need = sum(supplies.values(), 0)
    if need != sum(demands.values(), 0):
        raise Infeasible(f"supplies {need} and demands {sum(demands.values(), 0)} differ")
    if not need:
        return Flow.zero(graph.m)
    f, value = route(graph, cap, supplies, demands)
    if value != need:
        raise Infeasible(f"routed {value} of {need} units")
    return f


def max_flow(
    net: FlowNetwork,
    cap: Sequence[Number] | None = None,
    sources: Sequence[int] | None = None,
    sinks: Sequence[int] | None = None,
) -> Flow:
    """Exact maximum flow, ignoring vertex capacities."""
    cap = net.cap if cap is None else cap
    sources = net.sources if sources is None else sources
    sinks = net.sinks if sinks is None else sinks
    f, _ = route(net.graph, cap, {s: INF for s in sources}, {t: INF for t in sinks})
    return f


def max_flow_value(net: FlowNetwork) -> Number:
    return flow_value(net, max_flow(net))


def max_flow_residual(net: FlowNetwork, base: Flow) -> Flow:
    """Maximum flow in the residual network of ``base``; add it to ``base``."""
    return max_flow(net, residual(net, base).cap)


def fixed_value_flow(
    net: FlowNetwork,
    value: Number,
    cap: Sequence[Number] | None = None,
) -> Flow:
    """A flow of exactly ``value`` from the sources to the sinks.

    Raises :class:`Infeasible` if the network cannot carry ``value``.
    """
    if value < 0:
        raise Infeasible(f"negative flow value {value}")
    cap = net.cap if cap is None else cap
    if value == 0:
        return Flow.zero(net.m)
    f, got = route(
        net.graph, cap, {s: INF for s in net.sources}, {t: INF for t in net.sinks}, limit=value
    )
    if got < value:
        raise Infeasible(f"network carries at most {got} < {value}")
    return f


def acyclic_max_flow(net: FlowNetwork, cap: Sequence[Number] | None = None) -> Flow:
    from .cycles import cancel_generic

    return cancel_generic(net, max_flow(net, cap))


def residual_of(net: FlowNetwork, f: Flow) -> list[Number]:
    return residual_capacities(net.cap, f)
