"""Maximum flow with three terminals and arbitrary rational capacities.

Two sources and one sink (one source and two sinks is handled by
reversing every arc).  After a maximum flow of the extended network is
made acyclic, at most one vertex ``x`` is overloaded.  A maximum flow in
the residual network around ``x`` (with ``x`` split into two sources
and two sinks along its rotation) gives a circulation ``g``.  Cancelling
cycles of ``f + g`` leaves one overloaded vertex ``y``:

* ``y == x``: the excess at ``x`` is exactly the gap between the two
  maximum flow values, and removing it through ``x`` finishes;
* ``y != x``: cancelling ``f + beta g`` is linear in ``beta``, so the
  inflow at ``x`` is linear too and its root gives a feasible maximum
  flow.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .cycles import cancel_ccw_then_cw
from .errors import (
    DegenerateDerivative,
    FixupShortfall,
    InvariantViolation,
    NoSaddle,
    WrongTerminalCount,
)
from .flow import (
    Flow,
    FlowNetwork,
    excesses,
    flow_value,
    inflows,
    is_feasible,
    outflow,
    residual_capacities,
    scale_flow,
)
from .gadgets import GadgetMap, build_extended, fill_cycles, restrict
from .embedding import Embedding
from .maxflow import max_flow, route
from .scalars import INF, Number, checks_enabled, exact

SAMPLE_BETAS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
MAX_REFINEMENTS = 200


@dataclass
class InterpolationState:
    f0: Flow
    g0: Flow
    x: int
    y: int
    s0: Number
    s1: Number
    beta0: Number
    beta: Number = 0  # where the returned flow was taken
    refinements: int = 0


@dataclass
class K3Trace:
    reversed: bool = False
    branch: str = ""  # "feasible" | "almost" | "interpolate"
    x: int | None = None
    y: int | None = None
    delta: Number = 0
    state: InterpolationState | None = None
    linearity: dict[Fraction, bool] = field(default_factory=dict)
    h_value: Number = 0
    sample_linearity: bool = False  # also sample outside the interpolation branch


@dataclass(frozen=True)
class SplitTerminals:
    """The residual network around ``x`` with ``x`` split apart.

    ``net`` shares edge indices with the extended network.  ``sign[e]``
    converts a flow on ``net`` back to the extended edge.
    """

    net: FlowNetwork
    sign: tuple[int, ...]
    x: int
    in_blocks: tuple[tuple[int, ...], ...]
    out_blocks: tuple[tuple[int, ...], ...]


def _terminal_edges(G: FlowNetwork) -> list[int]:
    return [G.m + i for i in range(len(G.sources))]


def initial_flow_k3(G: FlowNetwork, ext: FlowNetwork) -> Flow:
    """Maximum flow from the first source, then from the second in the
    residual network; cycles of the restriction are cancelled."""
    if len(G.sources) != 2 or len(G.sinks) != 1:
        raise WrongTerminalCount(f"need two sources and one sink, got {len(G.sources)} and {len(G.sinks)}")
    a, b = _terminal_edges(G)
    cap1 = list(ext.cap)
    cap1[2 * b] = 0
    f1 = max_flow(ext, cap1)
    cap2 = residual_capacities(ext.cap, f1)
    cap2[2 * a] = cap2[2 * a + 1] = 0
    f2 = max_flow(ext, cap2)
    return cancel_ccw_then_cw(ext, f1 + f2, G.m)


def _blocks(signs: list[int]) -> list[tuple[int, list[int]]]:
    """Maximal cyclic runs of equal nonzero sign, zeros skipped."""
    pos = [i for i, s in enumerate(signs) if s]
    if not pos:
        return []
    runs: list[tuple[int, list[int]]] = []
    for i in pos:
        if runs and runs[-1][0] == signs[i]:
            runs[-1][1].append(i)
        else:
            runs.append((signs[i], [i]))
    if len(runs) > 1 and runs[0][0] == runs[-1][0]:
        sign, tail = runs.pop()
        runs[0] = (sign, tail + runs[0][1])
    return runs


def build_h_k3(G: FlowNetwork, ext: FlowNetwork, emap: GadgetMap, fo: Flow, x: int) -> SplitTerminals:
    f = restrict(fo, emap)
    if x not in excesses(G, f):
        raise NoSaddle(f"vertex {x} is not overloaded")
    cyc = emap.cycles[x]
    g = ext.graph
    rot = cyc.attached
    signs = []
    for d in rot:
        a = fo[d] - fo[d ^ 1]
        signs.append((a > 0) - (a < 0))
    runs = _blocks(signs)
    n = g.n
    corr: dict[int, int] = {}
    in_blocks, out_blocks = [], []
    for sign, idx in runs:
        for i in idx:
            corr[i] = n
        (out_blocks if sign > 0 else in_blocks).append(tuple(rot[i] for i in idx))
        n += 1
    tails, heads = list(g.tails), list(g.heads)
    caps = residual_capacities(ext.cap, fo)
    sign = [1] * g.m
    for e in cyc.edges:
        caps[2 * e] = caps[2 * e + 1] = 0
    for e in _terminal_edges(G):
        caps[2 * e] = caps[2 * e + 1] = 0
    for i, d in enumerate(rot):
        e = d >> 1
        a = fo[d] - fo[d ^ 1]
        u = g.dart_heads[d]
        tails[e], heads[e] = corr.get(i, x), u
        sign[e] = 1 if d % 2 == 0 else -1
        # flow towards u cuts inflow at x; flow from u cuts outflow
        caps[2 * e], caps[2 * e + 1] = (-a, 0) if a < 0 else (0, a)
    emb = Embedding(n=n, tails=tuple(tails), heads=tuple(heads))
    src = tuple(corr[idx[0]] for s, idx in runs if s < 0)
    snk = tuple(corr[idx[0]] for s, idx in runs if s > 0)
    net = FlowNetwork(emb, tuple(caps), (INF,) * n, src, snk)
    return SplitTerminals(net, tuple(sign), x, tuple(in_blocks), tuple(out_blocks))


def lift_h_flow(h: Flow, H: SplitTerminals, emap: GadgetMap, fo: Flow) -> Flow:
    """Circulation on the extended network induced by a flow on ``H``."""
    cyc = emap.cycles[H.x]
    vals = [exact(fo.values[e] + H.sign[e] * h.values[e]) for e in range(fo.m)]
    vals = fill_cycles(emap, vals, [H.x])
    on_cycle = set(cyc.edges)
    return Flow(tuple(
        exact(vals[e] - fo.values[e]) if e in on_cycle else exact(H.sign[e] * h.values[e])
        for e in range(fo.m)
    ))


def _inflow(G: FlowNetwork, f: Flow, v: int) -> Number:
    return inflows(G.graph, f)[v]


def pipeline(G: FlowNetwork, ext: FlowNetwork, emap: GadgetMap, fo: Flow, go: Flow, beta: Number) -> Flow:
    """``F(., beta)``: restriction of the cancelled ``f + beta g``."""
    return restrict(cancel_ccw_then_cw(ext, fo + scale_flow(beta, go), G.m), emap)


def linearity(
    G: FlowNetwork, ext: FlowNetwork, emap: GadgetMap, fo: Flow, go: Flow,
    betas=SAMPLE_BETAS,
) -> dict[Fraction, bool]:
    """Whether ``F(., beta)`` matches the straight line between its
    endpoints on every arc, per sampled ``beta``."""
    F0 = pipeline(G, ext, emap, fo, go, 0)
    F1 = pipeline(G, ext, emap, fo, go, 1)
    out = {}
    for b in betas:
        Fb = pipeline(G, ext, emap, fo, go, b)
        out[b] = all(v == (1 - b) * p + b * q for v, p, q in zip(Fb.values, F0.values, F1.values))
    return out


def crossing(s0: Number, s1: Number) -> Fraction:
    """Where the line through ``(0, s0)`` and ``(1, s1)`` meets zero."""
    if s0 == s1:
        raise DegenerateDerivative(f"constant signed excess {s0}")
    return Fraction(s0) / (s0 - s1)


def interpolate_beta(
    G: FlowNetwork, ext: FlowNetwork, emap: GadgetMap, fo: Flow, go: Flow, x: int, y: int,
    trace: K3Trace | None = None,
) -> Flow:
    """Feasible ``F(., beta)`` at the root of the signed excess at ``x``.

    The straight-line root is exact when ``F`` is linear in ``beta``.
    When it is not, the root is refined inside a bracket (``x``
    overloaded at the low end, feasible at the high end) by exact
    secant steps, bisecting when a step would not move.
    """
    F0 = pipeline(G, ext, emap, fo, go, 0)
    F1 = pipeline(G, ext, emap, fo, go, 1)
    c = G.vertex_cap[x]
    s0 = _inflow(G, F0, x) - c
    s1 = _inflow(G, F1, x) - c
    beta0 = crossing(s0, s1)
    beta = beta0
    out = pipeline(G, ext, emap, fo, go, beta)
    lo, s_lo, hi, s_hi = Fraction(0), s0, Fraction(1), s1
    steps = 0
    while excesses(G, out):
        if steps == MAX_REFINEMENTS:
            raise InvariantViolation(f"no feasible beta found in [{lo}, {hi}]")
        s = _inflow(G, out, x) - c
        if s > 0:
            lo, s_lo = beta, s
        else:
            hi, s_hi = beta, s
        beta = lo + (hi - lo) * crossing(s_lo, s_hi)
        if beta in (lo, hi):
            beta = (lo + hi) / 2
        out = pipeline(G, ext, emap, fo, go, beta)
        steps += 1
    if trace is not None:
        trace.state = InterpolationState(fo, go, x, y, s0, s1, beta0, beta, steps)
        trace.linearity = linearity(G, ext, emap, fo, go)
    return out


def almost_feasible_fixup(G: FlowNetwork, f: Flow, x: int, delta: Number) -> Flow:
    """Remove ``delta`` units of flow through ``x`` along flow paths."""
    if delta == 0:
        return f
    g = G.graph
    caps: list[Number] = []
    for v in f.values:
        caps.extend((max(v, 0), max(-v, 0)))
    s1, s2 = G.sources
    (t,) = G.sinks
    first = min(outflow(G, f, s1), delta)
    g1, v1 = route(g, caps, {s1: first}, {x: delta})
    rest = exact(delta - v1)
    g2, v2 = route(g, residual_capacities(caps, g1), {s2: rest}, {x: rest}) if rest else (Flow.zero(g.m), 0)
    if v1 + v2 < delta:
        raise FixupShortfall(f"only {v1 + v2} of {delta} units reach vertex {x}")
    g3, v3 = route(g, caps, {x: delta}, {t: delta})
    if v3 < delta:
        raise FixupShortfall(f"only {v3} of {delta} units leave vertex {x}")
    into = g1 + g2
    if any(a and b for a, b in zip(into.values, g3.values)):
        raise InvariantViolation("paths into and out of the overloaded vertex share an arc")
    return f - into - g3


def _reverse(G: FlowNetwork) -> FlowNetwork:
    cap = []
    for e in range(G.m):
        cap.extend((G.cap[2 * e + 1], G.cap[2 * e]))
    return replace(G, cap=tuple(cap), sources=G.sinks, sinks=G.sources)


def solve_k3(G: FlowNetwork, trace: K3Trace | None = None) -> Flow:
    trace = K3Trace() if trace is None else trace
    if G.k != 3 or not G.sources or not G.sinks:
        raise WrongTerminalCount(f"the three-terminal solver needs k = 3, got k = {G.k}")
    if len(G.sources) == 1:
        trace.reversed = True
        return solve_k3(_reverse(G), trace).reversed()
    ext, emap = build_extended(G)
    fo = initial_flow_k3(G, ext)
    f = restrict(fo, emap)
    bad = excesses(G, f)
    if not bad:
        trace.branch = "feasible"
        return f
    if len(bad) > 1:
        raise InvariantViolation(f"acyclic flow overloads {len(bad)} vertices")
    (x,) = bad
    trace.x = x
    H = build_h_k3(G, ext, emap, fo, x)
    gh = max_flow(H.net)
    trace.h_value = flow_value(H.net, gh)
    go = lift_h_flow(gh, H, emap, fo)
    f3 = restrict(cancel_ccw_then_cw(ext, fo + go, G.m), emap)
    bad3 = excesses(G, f3)
    if len(bad3) > 1:
        raise InvariantViolation(f"acyclic flow overloads {len(bad3)} vertices")
    if not bad3:
        trace.branch = "feasible"
        out = f3
    else:
        (y,) = bad3
        trace.y = y
        if y == x:
            trace.branch = "almost"
            trace.delta = bad3[x]
            out = almost_feasible_fixup(G, f3, x, bad3[x])
        else:
            trace.branch = "interpolate"
            out = interpolate_beta(G, ext, emap, fo, go, x, y, trace)
    if trace.sample_linearity and not trace.linearity:
        trace.linearity = linearity(G, ext, emap, fo, go)
    if checks_enabled():
        report = is_feasible(G, out)
        if not report.ok:
            raise InvariantViolation("; ".join(report.lines()))
    return out
