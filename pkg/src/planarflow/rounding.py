"""Round a fractional flow of integral value to an integral flow.

Every fractional edge can move up to its ceiling or down to its floor,
so in the fractional residual each such edge is usable in both
directions.  Conservation with integral imbalances means no vertex
touches exactly one fractional edge, so a walk that never reuses the
edge it arrived on must close a cycle.  Pushing the cycle's bottleneck
makes at least one edge integral; repeat until none is left.
"""

from __future__ import annotations

from .errors import NoCycle, NonIntegralValue
from .flow import Flow, FlowNetwork, flow_value, imbalances
from .scalars import Number, ceil, exact, floor, is_integral


def fractional_residual(f: Flow) -> dict[int, Number]:
    """Residual darts of the fractional edges: ``dart -> capacity``.

    For a dart carrying ``a`` with fractional part ``delta`` the dart
    itself gets ``1 - delta`` and its reverse gets ``delta``.
    """
    out: dict[int, Number] = {}
    for e, x in enumerate(f.values):
        if is_integral(x):
            continue
        d = 2 * e if x > 0 else 2 * e + 1
        a = abs(x)
        delta = a - floor(a)
        out[d] = exact(1 - delta)
        out[d ^ 1] = exact(delta)
    return out


def round_flow(f: Flow, net: FlowNetwork) -> Flow:
    return round_flow_counted(f, net)[0]


def round_flow_counted(f: Flow, net: FlowNetwork) -> tuple[Flow, int]:
    """Rounded flow and the number of cycle pushes it took."""
    value = flow_value(net, f)
    if not is_integral(value):
        raise NonIntegralValue(f"flow value {value} is not integral")
    g = net.graph
    m = g.m
    # Virtual edges make the flow a circulation: sigma -> s, t -> tau and
    # tau -> sigma carrying the (integral) total value.
    sigma, tau = g.n, g.n + 1
    tails = list(g.tails)
    heads = list(g.heads)
    imb = imbalances(g, f)
    vals = list(f.values)
    for s in net.sources:
        tails.append(sigma)
        heads.append(s)
        vals.append(imb[s])
    for t in net.sinks:
        tails.append(t)
        heads.append(tau)
        vals.append(-imb[t])
    tails.append(tau)
    heads.append(sigma)
    vals.append(value)

    incident: list[list[int]] = [[] for _ in range(g.n + 2)]
    for e in range(len(vals)):
        incident[tails[e]].append(e)
        incident[heads[e]].append(e)
    fractional = {e for e, x in enumerate(vals) if not is_integral(x)}

    def res(d: int) -> Number:
        x = vals[d >> 1]
        return ceil(x) - x if not d & 1 else x - floor(x)

    def leave(v: int, skip: int) -> int | None:
        for e in incident[v]:
            if e != skip and e in fractional:
                return 2 * e if tails[e] == v else 2 * e + 1
        return None

    iterations = 0
    path: list[int] = []
    pos: dict[int, int] = {}
    while fractional:
        if not path:
            e0 = min(fractional)
            v = tails[e0]
            pos = {v: 0}
            skip = -1
        else:
            v = heads[path[-1] >> 1] if not path[-1] & 1 else tails[path[-1] >> 1]
            skip = path[-1] >> 1
        d = leave(v, skip)
        if d is None:
            raise NoCycle(f"fractional walk stuck at vertex {v}")
        w = heads[d >> 1] if not d & 1 else tails[d >> 1]
        if w not in pos:
            path.append(d)
            pos[w] = len(path)
            continue
        start = pos[w]
        cyc = path[start:] + [d]
        b = min(res(c) for c in cyc)
        for c in cyc:
            vals[c >> 1] += -b if c & 1 else b
            vals[c >> 1] = exact(vals[c >> 1])
            if is_integral(vals[c >> 1]):
                fractional.discard(c >> 1)
        iterations += 1
        for c in path[start:]:
            del pos[heads[c >> 1] if not c & 1 else tails[c >> 1]]
        del path[start:]
    return Flow(tuple(vals[:m])), iterations
