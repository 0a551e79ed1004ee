"""Maximum flow for general integer capacities by excess scaling.

Binary search over the flow value ``lam``.  For one guess:

1. take a flow of value ``lam`` in the cycle-extended network and make
   its restriction acyclic;
2. while the largest vertex excess exceeds ``2 k Delta``, improve:
   route each overloaded vertex's excess around it in the collapsed
   network (stage 1), keep a rounded ``1/k`` share of that circulation
   (stage 2), then cancel cycles (stage 3);
3. strip the remaining excess and augment in the split graph.

A guess is accepted when step 3 returns a feasible flow of value at
least ``lam``.  Step 3 always yields a maximum flow, so an accepted
guess also pins the lower end of the search to the optimum.

Odd vertex capacities would put half units on cycle edges, so such
instances are solved with every capacity doubled and the answer is
halved and rounded in the split graph.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .bounded import integralize, finish_in_split, strip_excess
from .cycles import cancel_ccw_then_cw, cancel_generic
from .errors import ExtensionFailure, Infeasible, InvariantViolation, StageFailure
from .flow import Flow, FlowNetwork, excesses, flow_value, is_feasible, scale_flow
from .gadgets import (
    GadgetMap,
    build_collapsed,
    build_extended,
    collapse_flow,
    restrict,
    uncollapse_flow,
)
from .maxflow import fixed_value_flow, max_flow, route
from .rounding import round_flow
from .scalars import Number, checks_enabled, exact, is_inf, is_integral

log = logging.getLogger(__name__)


@dataclass
class PhaseState:
    """One improvement step: guess, flow, overloaded set and the bounds."""

    lam: Number
    flow: Flow
    X: tuple[int, ...]
    ex_x: dict[int, Number]
    ex: Number
    delta: int
    U: Number


@dataclass(frozen=True)
class PhaseRecord:
    lam: Number
    pre: Number
    post: Number
    k: int
    delta: int
    X: tuple[int, ...]

    @property
    def bound(self) -> Number:
        """Allowed post-excess: ceil((k-1)/k * pre) + Delta."""
        return math.ceil(Fraction(self.k - 1, self.k) * self.pre) + self.delta


@dataclass
class ScalingTrace:
    doubled: bool = False
    guesses: list[tuple[Number, bool, str]] = field(default_factory=list)
    phases: list[PhaseRecord] = field(default_factory=list)
    loop_counts: list[int] = field(default_factory=list)
    loop_cap: int = 0
    stage_checks: int = 0


def iteration_cap(k: int, U: Number) -> int:
    return math.floor(8 * k * (math.log2(max(1, k * U)) + 2))


def _needs_doubling(G: FlowNetwork) -> bool:
    return any(
        not is_inf(c) and not (is_integral(c) and int(c) % 2 == 0)
        for v, c in enumerate(G.vertex_cap)
        if v not in G.terminals
    )


def doubled(G: FlowNetwork) -> FlowNetwork:
    return replace(
        G,
        cap=tuple(c if is_inf(c) else 2 * c for c in G.cap),
        vertex_cap=tuple(c if is_inf(c) else 2 * c for c in G.vertex_cap),
    )


# -- one improvement ----------------------------------------------------------


def _collapsed_restriction(h: list[Number], cmap: GadgetMap, m: int) -> Flow:
    vals: list[Number] = [0] * m
    for e, b in enumerate(cmap.edge_map):
        if 0 <= b < m:
            vals[b] = h[e]
    return Flow(tuple(vals))


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise InvariantViolation(msg)


def improve_stage1(
    G: FlowNetwork, ext: FlowNetwork, emap: GadgetMap, fo: Flow, X: tuple[int, ...],
    trace: ScalingTrace | None = None,
) -> Flow:
    """Circulation ``g`` on the extended network clearing the excess of ``X``.

    Raises :class:`StageFailure` when some overloaded vertex cannot shed
    its excess, which means the guessed value is too high.
    """
    if not X:
        return Flow.zero(ext.m)
    f = restrict(fo, emap)
    ex_f = max(excesses(G, f).values(), default=0)
    cnet, cmap = build_collapsed(ext, emap, X)
    h = list(collapse_flow(fo, cmap).values)
    cg = cnet.graph
    checks = checks_enabled()
    for i, x in enumerate(X):
        e_i = cmap.split_edges[x]
        c_i = G.vertex_cap[x]
        u = h[e_i] - c_i
        if u > 0:
            caps: list[Number] = []
            for e in range(cg.m):
                a, b = cnet.cap[2 * e], cnet.cap[2 * e + 1]
                caps.extend((a - h[e] if not is_inf(a) else a, b + h[e] if not is_inf(b) else b))
            caps[2 * e_i] = caps[2 * e_i + 1] = 0
            for xj in X[i + 1:]:
                e_j = cmap.split_edges[xj]
                if h[e_j] > G.vertex_cap[xj]:
                    caps[2 * e_j] = G.vertex_cap[xj] + ex_f - h[e_j]
                    caps[2 * e_j + 1] = h[e_j]
            x_in, x_out = cmap.vertex_corr[x]
            phi, got = route(cg, caps, {x_in: u}, {x_out: u})
            if got < u:
                raise StageFailure(f"vertex {x} can shed only {got} of its excess {u}")
            phi = cancel_generic(cg, phi)
            for e in range(cg.m):
                h[e] = exact(h[e] + phi.values[e])
            h[e_i] = exact(h[e_i] - u)
        if checks:
            hr = _collapsed_restriction(h, cmap, G.m)
            for xj in X:
                hv = h[cmap.split_edges[xj]]
                _check(hv >= 0, f"split arc of {xj} runs backwards")
            for xj in X[: i + 1]:
                _check(h[cmap.split_edges[xj]] <= G.vertex_cap[xj], f"{xj} still overloaded after its turn")
            for xj in X[i + 1:]:
                _check(
                    h[cmap.split_edges[xj]] <= G.vertex_cap[xj] + ex_f,
                    f"{xj} exceeds capacity plus the starting excess",
                )
            for v, a in excesses(G, hr).items():
                if v not in X:
                    _check(a <= (i + 1) * ex_f, f"vertex {v} excess {a} > {i + 1} * {ex_f}")
            if trace is not None:
                trace.stage_checks += 1
    try:
        ho = uncollapse_flow(Flow(tuple(h)), cmap)
    except ExtensionFailure as exc:
        raise StageFailure(str(exc)) from None
    g = Flow(tuple(exact(a - b) for a, b in zip(ho.values, fo.values)))
    if checks:
        hr = restrict(ho, emap)
        ex_after = excesses(G, hr)
        k = G.k
        for v, a in ex_after.items():
            _check(v not in X, f"overloaded vertex {v} kept excess {a}")
            _check(a <= (k - 2) * ex_f, f"vertex {v} excess {a} > (k-2) * {ex_f}")
        _check(not is_feasible(ext, ho).arcs, "stage-1 flow violates an arc capacity")
    return g


def improve_stage2(ext: FlowNetwork, g: Flow, k: int) -> Flow:
    """Integral circulation within one unit of ``g / k`` on every edge."""
    return round_flow(scale_flow(Fraction(1, k), g), ext)


def improve(
    G: FlowNetwork, ext: FlowNetwork, emap: GadgetMap, fo: Flow,
    trace: ScalingTrace | None = None, lam: Number = 0,
) -> Flow:
    f = restrict(fo, emap)
    exs = excesses(G, f)
    state = PhaseState(
        lam, fo, tuple(sorted(exs)), exs, max(exs.values(), default=0),
        G.max_degree(), G.max_vertex_capacity(),
    )
    g = improve_stage1(G, ext, emap, fo, state.X, trace)
    gk = improve_stage2(ext, g, G.k)
    f1 = fo + gk
    if checks_enabled():
        bound = Fraction(G.k - 1, G.k) * state.ex + state.delta
        for v, a in excesses(G, restrict(f1, emap)).items():
            _check(a <= bound, f"vertex {v} excess {a} above the contraction bound {bound}")
    f1 = cancel_ccw_then_cw(ext, f1, G.m)
    post = max(excesses(G, restrict(f1, emap)).values(), default=0)
    if trace is not None:
        trace.phases.append(PhaseRecord(lam, state.ex, post, G.k, state.delta, state.X))
    return f1


# -- the search ---------------------------------------------------------------


def attempt(
    G: FlowNetwork, ext: FlowNetwork, emap: GadgetMap, lam: Number,
    trace: ScalingTrace | None = None,
) -> Flow | None:
    """Run the three phases for one guess; None means the guess is too high."""
    try:
        fo = fixed_value_flow(ext, lam)
    except Infeasible:
        return None
    fo = cancel_ccw_then_cw(ext, fo, G.m)
    k, delta = G.k, G.max_degree()
    cap = iteration_cap(k, G.max_vertex_capacity())
    if trace is not None:
        trace.loop_cap = cap
    loops = 0
    try:
        while max(excesses(G, restrict(fo, emap)).values(), default=0) > 2 * k * delta:
            if loops >= cap:
                raise InvariantViolation(f"improvement loop exceeded {cap} iterations")
            fo = improve(G, ext, emap, fo, trace, lam)
            loops += 1
    except StageFailure as exc:
        log.debug("guess %s rejected in phase 2: %s", lam, exc)
        return None
    finally:
        if trace is not None:
            trace.loop_counts.append(loops)
    f1, _ = strip_excess(G, restrict(fo, emap))
    return finish_in_split(G, f1)


def run_scaling(G: FlowNetwork, trace: ScalingTrace) -> Flow:
    """Binary search on an instance whose cycle edges are integral."""
    ext, emap = build_extended(G)
    lo, hi = 0, flow_value(ext, max_flow(ext))
    best = Flow.zero(G.m)
    while lo < hi:
        lam = (lo + hi + 1) // 2
        out = attempt(G, ext, emap, lam, trace)
        value = None if out is None else flow_value(G, out)
        if value is not None and value >= lam:
            trace.guesses.append((lam, True, f"value {value}"))
            best, lo = out, value
        else:
            trace.guesses.append((lam, False, "phase 2 failed" if out is None else f"value {value}"))
            hi = lam - 1
    return best


def solve_scaling(G: FlowNetwork, trace: ScalingTrace | None = None) -> Flow:
    trace = ScalingTrace() if trace is None else trace
    if _needs_doubling(G):
        trace.doubled = True
        f2 = run_scaling(doubled(G), trace)
        out = integralize(G, scale_flow(Fraction(1, 2), f2))
    else:
        out = run_scaling(G, trace)
    if checks_enabled():
        report = is_feasible(G, out)
        if not report.ok:
            raise InvariantViolation("; ".join(report.lines()))
    return out
