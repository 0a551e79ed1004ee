"""Maximum flow for small integer capacities.

Take a maximum flow of the cycle-extended network, cancel its cycles,
restrict it to the input graph, then strip the excess at each
overloaded vertex along source-to-vertex-to-sink paths.  The stripped
flow is feasible and loses at most the total excess, which a final
augmentation in the split graph recovers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cycles import cancel_ccw_then_cw
from .errors import InvariantViolation, PathNotFound
from .flow import Flow, FlowNetwork, excesses, flow_value, is_feasible
from .gadgets import build_extended, build_split, extend_to_split, restrict
from .maxflow import max_flow, max_flow_residual
from .rounding import round_flow
from .scalars import Number, checks_enabled, exact, is_inf, is_integral


def _walk(net: FlowNetwork, vals: list[Number], start: int, forward: bool) -> list[int]:
    """Follow positive darts from ``start`` to a sink (or back to a source)."""
    g = net.graph
    stop = set(net.sinks if forward else net.sources)
    path = []
    v = start
    seen = {v}
    while v not in stop:
        for d in g.out_darts[v]:
            x = vals[d >> 1]
            amt = -x if d & 1 else x
            # forward: flow leaves v along d; backward: flow enters v along rev(d)
            if (amt > 0) if forward else (amt < 0):
                break
        else:
            raise PathNotFound(f"no flow-carrying dart {'out of' if forward else 'into'} vertex {v}")
        path.append(d if forward else d ^ 1)
        v = g.dart_heads[d]
        if v in seen:
            raise PathNotFound(f"flow graph has a cycle through vertex {v}")
        seen.add(v)
    return path


def strip_excess(net: FlowNetwork, f: Flow) -> tuple[Flow, Number]:
    """Remove each overloaded vertex's excess along flow paths through it.

    Returns the feasible flow and the total amount removed.
    """
    vals = list(f.values)
    removed: Number = 0
    for x, ex in sorted(excesses(net, f).items()):
        left = ex
        while left > 0:
            p_in = _walk(net, vals, x, forward=False)
            p_out = _walk(net, vals, x, forward=True)
            darts = p_in + p_out
            amounts = [vals[d >> 1] if not d & 1 else -vals[d >> 1] for d in darts]
            b = min(min(amounts), left)
            for d in darts:
                vals[d >> 1] = exact(vals[d >> 1] + (b if d & 1 else -b))
            left -= b
            removed += b
    return Flow(tuple(vals)), exact(removed)


@dataclass
class BoundedTrace:
    extended_value: Number = 0
    stripped: Number = 0
    augmented: Number = 0
    rounded: bool = False


def _round_split(bar: FlowNetwork, fb: Flow) -> tuple[Flow, bool]:
    integer_caps = all(is_integral(c) for c in bar.cap if not is_inf(c))
    if integer_caps and not all(is_integral(x) for x in fb.values):
        return round_flow(fb, bar), True
    return fb, False


def integralize(G: FlowNetwork, f: Flow) -> Flow:
    """Round a feasible flow to an integral one of the same value."""
    bar, smap = build_split(G)
    fb, _ = _round_split(bar, extend_to_split(f, smap))
    return restrict(fb, smap)


def finish_in_split(G: FlowNetwork, f1: Flow, trace: BoundedTrace | None = None) -> Flow:
    """Augment a feasible flow to a maximum one in the split graph.

    A non-integral result on integer capacities is rounded in the split
    graph, which keeps the value.
    """
    bar, smap = build_split(G)
    fb1 = extend_to_split(f1, smap)
    fb2 = max_flow_residual(bar, fb1)
    fb, rounded = _round_split(bar, fb1 + fb2)
    if trace is not None:
        trace.augmented = flow_value(bar, fb2)
        trace.rounded = rounded
    return restrict(fb, smap)


def solve_bounded(G: FlowNetwork, trace: BoundedTrace | None = None) -> Flow:
    trace = BoundedTrace() if trace is None else trace
    ext, emap = build_extended(G)
    fo = max_flow(ext)
    trace.extended_value = flow_value(ext, fo)
    fo = cancel_ccw_then_cw(ext, fo, G.m)
    f = restrict(fo, emap)
    f1, trace.stripped = strip_excess(G, f)
    out = finish_in_split(G, f1, trace)
    if checks_enabled():
        if trace.augmented > trace.stripped:
            raise InvariantViolation(
                f"augmentation {trace.augmented} exceeds stripped excess {trace.stripped}"
            )
        report = is_feasible(G, out)
        if not report.ok:
            raise InvariantViolation("; ".join(report.lines()))
    return out
