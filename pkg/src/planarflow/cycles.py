"""Cycle cancellation.

:func:`potential_circulation` turns dual shortest-path distances into a
circulation that leaves no residual cycle of one orientation.  Two
passes of it, with capacities clamped to the current flow on the base
edges, make the restriction of a gadget flow acyclic
(:func:`cancel_ccw_then_cw`).  :func:`cancel_generic` is a plain
depth-first canceller for arbitrary graphs.
"""

from __future__ import annotations

from typing import Sequence

from .embedding import Embedding, dual, require_finite
from .errors import InfeasibleInput, InvariantViolation, NotAcyclic
from .flow import Flow, FlowNetwork, add_flows, is_arc_feasible
from .scalars import Number, checks_enabled, exact


def potential_circulation(
    graph: Embedding, caps: Sequence[Number], *, reverse: bool = False
) -> Flow:
    """Circulation from face potentials of the dual with lengths ``caps``.

    Edge ``e`` gets net ``Phi(right) - Phi(left)`` along dart ``2e``
    (negated when ``reverse``), which never exceeds ``caps`` and sums
    to zero around every vertex.  Apex edges get zero.
    """
    dg = dual(graph, caps, reverse=reverse)
    phi = dg.distances()
    require_finite(phi)
    face_of = graph.face_of
    vals: list[Number] = [0] * graph.m
    for e in range(graph.m):
        left = face_of[2 * e]
        if left < 0:
            continue
        right = face_of[2 * e + 1]
        x = phi[right] - phi[left]
        vals[e] = exact(-x if reverse else x)
    return Flow(tuple(vals))


def _clamped_residual(net: FlowNetwork, f: Flow, base_m: int) -> list[Number]:
    """Residual where base edges may only shrink their current flow."""
    out: list[Number] = []
    for e, x in enumerate(f.values):
        if e < base_m:
            out.append(-x if x < 0 else 0)
            out.append(x if x > 0 else 0)
        else:
            out.append(net.cap[2 * e] - x)
            out.append(net.cap[2 * e + 1] + x)
    return out


def cancel_pass(net: FlowNetwork, f: Flow, base_m: int, *, reverse: bool) -> Flow:
    g = potential_circulation(net.graph, _clamped_residual(net, f, base_m), reverse=reverse)
    return add_flows(f, g)


def cancel_ccw_then_cw(net: FlowNetwork, f: Flow, base_m: int) -> Flow:
    """Make the restriction to edges ``0..base_m-1`` acyclic.

    ``net`` is an embedded network whose first ``base_m`` edges are the
    base graph's arcs.  Value is preserved and base-edge flows only
    shrink.
    """
    if not is_arc_feasible(net, f):
        raise InfeasibleInput("flow violates an arc capacity")
    f1 = cancel_pass(net, f, base_m, reverse=False)
    f2 = cancel_pass(net, f1, base_m, reverse=True)
    if checks_enabled():
        for e in range(base_m):
            a, b = f.values[e], f2.values[e]
            if not (a * b >= 0 and abs(b) <= abs(a)):
                raise InvariantViolation(f"base edge {e} grew from {a} to {b}")
        cyc = find_flow_cycle(net.graph, f2, base_m)
        if cyc is not None:
            raise NotAcyclic(f"restriction still has flow cycle {cyc}")
    return f2


def find_flow_cycle(graph: Embedding, f: Flow, m: int | None = None) -> list[int] | None:
    """A directed cycle of positive darts among edges ``< m``, or None."""
    m = graph.m if m is None else m
    out: list[list[int]] = [[] for _ in range(graph.n)]
    for e in range(m):
        x = f.values[e]
        if x > 0:
            out[graph.tails[e]].append(2 * e)
        elif x < 0:
            out[graph.heads[e]].append(2 * e + 1)
    heads = graph.dart_heads
    state = [0] * graph.n
    for root in range(graph.n):
        if state[root]:
            continue
        state[root] = 1
        pos = {root: 0}
        path: list[int] = []
        stack = [[root, 0]]
        while stack:
            top = stack[-1]
            v, i = top
            if i == len(out[v]):
                state[v] = 2
                del pos[v]
                stack.pop()
                if path:
                    path.pop()
                continue
            top[1] += 1
            d = out[v][i]
            w = heads[d]
            if state[w] == 1:
                return path[pos[w]:] + [d]
            if state[w] == 0:
                state[w] = 1
                path.append(d)
                pos[w] = len(path)
                stack.append([w, 0])
    return None


def is_acyclic(graph: Embedding, f: Flow, m: int | None = None) -> bool:
    return find_flow_cycle(graph, f, m) is None


def cancel_generic(net: FlowNetwork | Embedding, f: Flow) -> Flow:
    """Cancel flow cycles by depth-first search; value is unchanged."""
    graph = net.graph if isinstance(net, FlowNetwork) else net
    vals = list(f.values)
    heads = graph.dart_heads
    tails = graph.dart_tails
    out = graph.out_darts

    def amount(d: int) -> Number:
        x = vals[d >> 1]
        return -x if d & 1 else x

    state = [0] * graph.n  # 0 new, 1 on stack, 2 done
    ptr = [0] * graph.n
    for root in range(graph.n):
        if state[root]:
            continue
        path: list[int] = []
        pos = {root: 0}
        state[root] = 1
        v = root
        while True:
            lst = out[v]
            i = ptr[v]
            while i < len(lst) and (amount(lst[i]) <= 0 or state[heads[lst[i]]] == 2):
                i += 1
            ptr[v] = i
            if i == len(lst):
                state[v] = 2
                del pos[v]
                if not path:
                    break
                v = tails[path.pop()]
                continue
            d = lst[i]
            w = heads[d]
            if state[w] == 0:
                state[w] = 1
                path.append(d)
                pos[w] = len(path)
                v = w
                continue
            cyc = path[pos[w]:] + [d]
            b = min(amount(c) for c in cyc)
            for c in cyc:
                vals[c >> 1] += b if c & 1 else -b
            cut = next(j for j, c in enumerate(cyc) if amount(c) == 0)
            keep = pos[w] + cut
            for c in path[keep:]:
                u = heads[c]
                state[u] = 0
                del pos[u]
            del path[keep:]
            v = tails[cyc[cut]]
    return Flow(tuple(exact(x) for x in vals))
