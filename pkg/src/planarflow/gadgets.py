"""Derived networks and flow translation.

* ``build_gst``: add a super source ``s`` and super sink ``t`` as apices.
* ``build_split``: replace capacitated ``v`` by an arc ``v_in -> v_out``.
  Not planar; the result carries no rotation system.
* ``build_extended``: replace capacitated ``v`` of degree ``d`` by an
  undirected cycle of ``d`` vertices with capacity ``c(v)/2`` per edge.
  Planar apart from ``s`` and ``t``.
* ``build_collapsed``: in the extended network, shrink the cycles of a
  chosen vertex set back to single ``x_in -> x_out`` arcs.

Index conventions: the st-network and the extended network keep every
base edge at its base index, followed by the terminal arcs.  The
extended network appends cycle edges after those, and cycle vertex
``v_0`` reuses index ``v``.  The split network keeps base vertex ``v``
as ``v_in``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .embedding import Embedding
from .errors import ExtensionFailure, Infeasible, InfeasibleInput
from .flow import Flow, FlowNetwork, imbalances, inflows, is_feasible
from .maxflow import route_demands
from .scalars import INF, Number, exact, half, is_inf


@dataclass(frozen=True)
class CycleGadget:
    """Cycle ``C_v``: ``nodes[i]`` is joined to ``nodes[i+1]`` by ``edges[i]``.

    ``attached[i]`` is the dart leaving ``nodes[i]`` that used to leave
    ``v`` at rotation position ``i``.
    """

    vertex: int
    nodes: tuple[int, ...]
    edges: tuple[int, ...]
    attached: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class GadgetMap:
    kind: str  # "st" | "split" | "extended" | "collapsed"
    base: FlowNetwork
    derived: FlowNetwork
    edge_map: tuple[int, ...]  # derived edge -> base edge, or -1
    edge_sign: tuple[int, ...] = ()
    vertex_corr: dict[int, tuple[int, int]] = field(default_factory=dict)
    cycles: dict[int, CycleGadget] = field(default_factory=dict)
    X: tuple[int, ...] = ()
    split_edges: dict[int, int] = field(default_factory=dict)  # vertex -> split edge
    parent: "GadgetMap | None" = None

    @property
    def base_m(self) -> int:
        return self.base.m

    @property
    def source(self) -> int:
        return self.derived.sources[0]

    @property
    def sink(self) -> int:
        return self.derived.sinks[0]


def _terminal_arcs(G: FlowNetwork) -> tuple[list[int], list[int], list[Number]]:
    s, t = G.n, G.n + 1
    tails, heads, cap = [], [], []
    for si in G.sources:
        tails.append(s)
        heads.append(si)
        cap.extend((INF, 0))
    for ti in G.sinks:
        tails.append(ti)
        heads.append(t)
        cap.extend((INF, 0))
    return tails, heads, cap


def build_gst(G: FlowNetwork) -> tuple[FlowNetwork, GadgetMap]:
    g = G.graph
    tt, th, tc = _terminal_arcs(G)
    rotation = None if g.rotation is None else g.rotation + ((), ())
    emb = Embedding(
        n=g.n + 2,
        tails=g.tails + tuple(tt),
        heads=g.heads + tuple(th),
        rotation=rotation,
        apices=g.apices | {g.n, g.n + 1},
        outer=g.outer,
    )
    net = FlowNetwork(emb, G.cap + tuple(tc), G.vertex_cap + (INF, INF), (g.n,), (g.n + 1,))
    edge_map = tuple(range(g.m)) + (-1,) * len(tt)
    return net, GadgetMap("st", G, net, edge_map, (1,) * emb.m)


def _capacitated(G: FlowNetwork) -> list[int]:
    term = G.terminals
    return [v for v in range(G.n) if v not in term and not is_inf(G.vertex_cap[v])]


def build_split(G: FlowNetwork) -> tuple[FlowNetwork, GadgetMap]:
    """Split graph.  Base edge ``e`` keeps index ``e``; a base edge with
    capacity on both darts gets a second derived edge for the backward
    direction.  Split arcs come last."""
    g = G.graph
    vout = {}
    for v in _capacitated(G):
        vout[v] = g.n + len(vout)
    n = g.n + len(vout)

    def out_end(v: int) -> int:
        return vout.get(v, v)

    tails, heads, cap, emap, sign = [], [], [], [], []
    for e in range(g.m):
        u, w = g.tails[e], g.heads[e]
        tails.append(out_end(u))
        heads.append(w)
        cap.extend((G.cap[2 * e], 0))
        emap.append(e)
        sign.append(1)
    for e in range(g.m):
        if G.cap[2 * e + 1] != 0:
            u, w = g.tails[e], g.heads[e]
            tails.append(out_end(w))
            heads.append(u)
            cap.extend((G.cap[2 * e + 1], 0))
            emap.append(e)
            sign.append(-1)
    split_edges = {}
    for v, vo in vout.items():
        split_edges[v] = len(tails)
        tails.append(v)
        heads.append(vo)
        cap.extend((G.vertex_cap[v], 0))
        emap.append(-1)
        sign.append(1)
    emb = Embedding(n=n, tails=tuple(tails), heads=tuple(heads))
    net = FlowNetwork(emb, tuple(cap), (INF,) * n, G.sources, G.sinks)
    corr = {v: (v, vo) for v, vo in vout.items()}
    gm = GadgetMap("split", G, net, tuple(emap), tuple(sign), vertex_corr=corr, split_edges=split_edges)
    return net, gm


def build_extended(G: FlowNetwork) -> tuple[FlowNetwork, GadgetMap]:
    """Extended network over the st-network of ``G``.

    Vertices of degree below 2 and vertices of infinite capacity keep
    their identity; every other capacitated vertex becomes a cycle.
    """
    g = G.graph
    if g.rotation is None:
        raise InfeasibleInput("the extended network needs a rotation system")
    tt, th, tc = _terminal_arcs(G)
    tails = list(g.tails) + tt
    heads = list(g.heads) + th
    cap = list(G.cap) + tc
    rotation: list[list[int]] = [list(r) for r in g.rotation] + [[], []]
    n = g.n + 2
    cycles: dict[int, CycleGadget] = {}
    new_edges_t: list[int] = []
    new_edges_h: list[int] = []
    new_cap: list[Number] = []
    base_edges = len(tails)
    for v in _capacitated(G):
        rot = g.rotation[v]
        d = len(rot)
        if d < 2:
            continue
        nodes = [v] + list(range(n, n + d - 1))
        n += d - 1
        rotation.extend([] for _ in range(d - 1))
        first = base_edges + len(new_edges_t)
        edges = list(range(first, first + d))
        c = half(G.vertex_cap[v])
        for i in range(d):
            new_edges_t.append(nodes[i])
            new_edges_h.append(nodes[(i + 1) % d])
            new_cap.extend((c, c))
        for i, dart in enumerate(rot):
            vi = nodes[i]
            if dart & 1:
                heads[dart >> 1] = vi
            else:
                tails[dart >> 1] = vi
            rotation[vi] = [dart, 2 * edges[i], 2 * edges[i - 1] + 1]
        cycles[v] = CycleGadget(v, tuple(nodes), tuple(edges), tuple(rot))
    tails += new_edges_t
    heads += new_edges_h
    cap += new_cap
    s, t = g.n, g.n + 1
    emb = Embedding(
        n=n,
        tails=tuple(tails),
        heads=tuple(heads),
        rotation=tuple(tuple(r) for r in rotation),
        apices=frozenset({s, t}) | g.apices,
        outer=g.outer,
    )
    net = FlowNetwork(emb, tuple(cap), (INF,) * n, (s,), (t,))
    emap = tuple(range(g.m)) + (-1,) * (emb.m - g.m)
    return net, GadgetMap("extended", G, net, emap, (1,) * emb.m, cycles=cycles)


def build_collapsed(
    ext: FlowNetwork, emap: GadgetMap, X: Iterable[int]
) -> tuple[FlowNetwork, GadgetMap]:
    """Collapse the cycles of ``X`` in the extended network.

    Vertex indices of the extended network are kept (cycle vertices of
    ``X`` other than ``x_0`` become isolated); ``x_in`` is ``x`` and
    ``x_out`` is appended.  Edges are rebuilt compactly with the split
    arcs last; ``edge_map`` points back into the extended network.
    """
    X = tuple(sorted(X))
    G = emap.base
    g = ext.graph
    drop: set[int] = set()
    n = g.n
    corr = {}
    for x in X:
        cyc = emap.cycles[x]
        drop.update(cyc.edges)
        corr[x] = (x, n)
        n += 1
    tails, heads, cap, back = [], [], [], []
    for e in range(g.m):
        if e in drop:
            continue
        u, w = g.tails[e], g.heads[e]
        back.append(e)
        tails.append(u)
        heads.append(w)
        cap.extend((ext.cap[2 * e], ext.cap[2 * e + 1]))
    # re-aim arcs touching collapsed cycles
    for x in X:
        cyc = emap.cycles[x]
        nodes = set(cyc.nodes)
        x_in, x_out = corr[x]
        for i, b in enumerate(back):
            if b >= G.m:
                continue
            if g.tails[b] in nodes:
                tails[i] = x_out
            if g.heads[b] in nodes:
                heads[i] = x_in
    split_edges = {}
    for x in X:
        split_edges[x] = len(tails)
        tails.append(corr[x][0])
        heads.append(corr[x][1])
        cap.extend((G.vertex_cap[x], 0))
        back.append(-1)
    emb = Embedding(n=n, tails=tuple(tails), heads=tuple(heads))
    net = FlowNetwork(emb, tuple(cap), (INF,) * n, ext.sources, ext.sinks)
    gm = GadgetMap(
        "collapsed", ext, net, tuple(back), (1,) * emb.m,
        vertex_corr=corr, X=X, split_edges=split_edges, parent=emap,
    )
    return net, gm


# -- flow translation ---------------------------------------------------------


def restrict(f: Flow, gmap: GadgetMap) -> Flow:
    """Copy values of derived edges that correspond to base edges."""
    vals: list[Number] = [0] * gmap.base.m
    for e, b in enumerate(gmap.edge_map):
        if b >= 0:
            x = f.values[e]
            vals[b] += x if gmap.edge_sign[e] > 0 else -x
    return Flow(tuple(exact(x) for x in vals))


def _terminal_values(G: FlowNetwork, f: Flow) -> list[Number]:
    imb = imbalances(G.graph, f)
    return [imb[s] for s in G.sources] + [-imb[t] for t in G.sinks]


def extend_to_st(f: Flow, gmap: GadgetMap) -> Flow:
    return Flow(f.values + tuple(_terminal_values(gmap.base, f)))


def extend_to_split(f: Flow, gmap: GadgetMap) -> Flow:
    G = gmap.base
    report = is_feasible(G, f)
    if not report.ok:
        raise InfeasibleInput("; ".join(report.lines()))
    vals: list[Number] = []
    for e, b in enumerate(gmap.edge_map):
        if b < 0:
            vals.append(0)
            continue
        x = f.values[b] * gmap.edge_sign[e]
        vals.append(x if x > 0 else 0)
    fin = inflows(G.graph, f)
    for v, e in gmap.split_edges.items():
        vals[e] = fin[v]
    return Flow(tuple(vals))


def fill_cycles(
    emap: GadgetMap, values: Sequence[Number], vertices: Iterable[int]
) -> list[Number]:
    """Recompute the cycle edges of ``vertices`` from the attached arcs.

    Each cycle vertex must absorb (or emit) what its attached dart
    carries; the cycle flow is an acyclic flow meeting those demands.
    Raises :class:`ExtensionFailure` if a cycle cannot carry it.
    """
    from .cycles import cancel_generic

    out = list(values)
    ext = emap.derived
    for v in vertices:
        cyc = emap.cycles.get(v)
        if cyc is None:
            continue
        d = len(cyc.nodes)
        supplies, demands = {}, {}
        for i, dart in enumerate(cyc.attached):
            x = out[dart >> 1]
            a = -x if dart & 1 else x
            if a > 0:
                demands[i] = a
            elif a < 0:
                supplies[i] = -a
        local = Embedding(n=d, tails=tuple(range(d)), heads=tuple((i + 1) % d for i in range(d)))
        caps = []
        for e in cyc.edges:
            caps.extend((ext.cap[2 * e], ext.cap[2 * e + 1]))
        try:
            h = route_demands(local, caps, supplies, demands)
        except Infeasible as exc:
            raise ExtensionFailure(f"cycle of vertex {v} cannot carry its demands: {exc}") from None
        h = cancel_generic(local, h)
        for i, e in enumerate(cyc.edges):
            out[e] = h.values[i]
    return out


def extend_to_extended(f: Flow, emap: GadgetMap) -> Flow:
    """Extend a flow on the base network (or on its st-network) to the
    extended network."""
    G = emap.base
    ext = emap.derived
    if f.m == G.m:
        vals = list(f.values) + _terminal_values(G, f)
    else:
        vals = list(f.values)
    vals += [0] * (ext.m - len(vals))
    return Flow(tuple(exact(x) for x in fill_cycles(emap, vals, emap.cycles)))


def collapse_flow(f: Flow, cmap: GadgetMap) -> Flow:
    """Carry an extended-network flow into the collapsed network."""
    cg = cmap.derived.graph
    vals: list[Number] = [0] * cg.m
    for e, b in enumerate(cmap.edge_map):
        if b >= 0:
            vals[e] = f.values[b]
    for x, e in cmap.split_edges.items():
        x_in = cmap.vertex_corr[x][0]
        total = 0
        for i in range(cg.m):
            if i != e and cg.heads[i] == x_in:
                total += vals[i]
            if i != e and cg.tails[i] == x_in:
                total -= vals[i]
        vals[e] = exact(total)
    return Flow(tuple(vals))


def uncollapse_flow(h: Flow, cmap: GadgetMap) -> Flow:
    """Lift a collapsed-network flow to the extended network, rebuilding
    the collapsed cycles from their attached arcs."""
    emap = cmap.parent
    ext = cmap.base
    vals: list[Number] = [0] * ext.m
    for e, b in enumerate(cmap.edge_map):
        if b >= 0:
            vals[b] = h.values[e]
    return Flow(tuple(exact(x) for x in fill_cycles(emap, vals, cmap.X)))
