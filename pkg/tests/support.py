"""Shared helpers: an independent networkx oracle and instance families."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import networkx as nx

from planarflow.embedding import build_embedding
from planarflow.flow import FlowNetwork
from planarflow.generate import generate
from planarflow.scalars import INF, is_inf


def _scale(G: FlowNetwork) -> int:
    dens = [Fraction(c).denominator for c in G.cap + G.vertex_cap if not is_inf(c)]
    return math.lcm(1, *dens)


def nx_value(G: FlowNetwork) -> Fraction:
    """Max feasible flow value via networkx on the split graph, with
    rational capacities scaled to integers."""
    q = _scale(G)
    g = G.graph
    D = nx.DiGraph()
    D.add_nodes_from(["S", "T"])

    def add(u, v, c):
        if is_inf(c):
            D.add_edge(u, v)  # no attribute: unbounded
        elif D.has_edge(u, v):
            if "capacity" in D[u][v]:
                D[u][v]["capacity"] += int(c * q)
        else:
            D.add_edge(u, v, capacity=int(c * q))

    for v in range(g.n):
        c = INF if v in G.terminals else G.vertex_cap[v]
        add(("i", v), ("o", v), c)
    for d in range(2 * g.m):
        if G.cap[d]:
            add(("o", g.dart_tails[d]), ("i", g.dart_heads[d]), G.cap[d])
    for s in G.sources:
        add("S", ("i", s), INF)
    for t in G.sinks:
        add(("o", t), "T", INF)
    return Fraction(nx.maximum_flow_value(D, "S", "T"), q)


def family(seed: int, **fixed) -> FlowNetwork:
    """Random instance; one in two puts sources inside faces, which makes
    the extended network overshoot the true optimum more often."""
    r = random.Random(seed * 7919 + 1)
    kw = dict(
        n=r.randint(12, 40), k=r.randint(2, 6), U=r.choice([4, 8]),
        antiparallel=r.uniform(0, 0.6), layout=r.choice(["grid", "grid", "web"]),
    )
    if seed % 2:
        kw.update(sources=2, face_sources=True, inner_terminals=True,
                  antiparallel=r.uniform(0.5, 1), density=1.0, k=max(3, kw["k"]))
    kw.update(fixed)
    if kw.get("sources") is not None and kw["sources"] >= kw["k"]:
        kw["k"] = kw["sources"] + 1
    return generate(seed, **kw)


def line_network(caps, vertex_caps, sources=(0,), sinks=None) -> FlowNetwork:
    """Path 0 -> 1 -> ... -> n-1."""
    n = len(vertex_caps)
    arcs = [(i, i + 1) for i in range(n - 1)]
    rot = []
    for v in range(n):
        r = []
        if v > 0:
            r.append(2 * (v - 1) + 1)
        if v < n - 1:
            r.append(2 * v)
        rot.append(r)
    emb = build_embedding(n, arcs, rot)
    cap = []
    for c in caps:
        cap.extend((c, 0))
    return FlowNetwork(emb, tuple(cap), tuple(vertex_caps), tuple(sources), tuple(sinks or (n - 1,)))


def geometric_rotation(pos, arcs):
    """Clockwise rotations of a straight-line drawing (y axis up)."""
    n = len(pos)
    rot = [[] for _ in range(n)]
    for e, (t, h) in enumerate(arcs):
        rot[t].append(2 * e)
        rot[h].append(2 * e + 1)

    def angle(v, d):
        e = d >> 1
        w = arcs[e][1] if d % 2 == 0 else arcs[e][0]
        return math.atan2(pos[w][1] - pos[v][1], pos[w][0] - pos[v][0])

    return [sorted(r, key=lambda d: -angle(v, d)) for v, r in enumerate(rot)]


SQUARE = [(0, 1), (0, 0), (1, 0), (1, 1)]  # 0 top-left, clockwise


def fractional_flow(seed: int):
    """An instance and a fractional arc-feasible flow of integral value:
    a random convex mix of two flows of equal value."""
    from planarflow.flow import flow_value
    from planarflow.maxflow import fixed_value_flow, max_flow
    from planarflow.flow import scale_flow

    r = random.Random(seed)
    G = family(seed, U=r.choice([3, 8, 20]))
    va = flow_value(G, max_flow(G))
    for _ in range(8):
        cap_b = [c if is_inf(c) or r.random() < 0.3 else r.randint(0, int(c)) for c in G.cap]
        vb = flow_value(G, max_flow(G, cap_b))
        v = r.randint(min(va, vb) // 2, min(va, vb))
        fa = fixed_value_flow(G, v)
        fb = fixed_value_flow(G, v, cap_b)
        if fa != fb:
            break
    w = Fraction(r.randint(1, 9), 10)
    return G, scale_flow(w, fa) + scale_flow(1 - w, fb)


def cyclic_extended_flow(seed: int, G=None):
    """A feasible flow on the extended network of an instance, with a few
    residual cycles pushed so that the restriction usually has cycles."""
    from planarflow.flow import Flow, flow_value, residual_capacities
    from planarflow.gadgets import build_extended
    from planarflow.maxflow import fixed_value_flow, max_flow

    r = random.Random(seed)
    G = family(seed) if G is None else G
    ext, emap = build_extended(G)
    top = flow_value(ext, max_flow(ext))
    f = fixed_value_flow(ext, r.randint(0, top) if top else 0)
    g = ext.graph
    for _ in range(r.randint(1, 4)):
        res = residual_capacities(ext.cap, f)
        D = nx.DiGraph()
        for d in range(g.dart_count):
            if res[d] > 0 and g.is_planar_edge(d >> 1) and not D.has_edge(g.dart_tails[d], g.dart_heads[d]):
                D.add_edge(g.dart_tails[d], g.dart_heads[d], dart=d)
        if not D:
            break
        try:
            cyc = nx.find_cycle(D, r.choice(list(D.nodes)))
        except nx.NetworkXNoCycle:
            continue
        darts = [D[a][b]["dart"] for a, b in cyc]
        if len({d >> 1 for d in darts}) < len(darts):
            continue
        amount = min(res[d] for d in darts)
        amount = amount if not is_inf(amount) else 1
        amount = Fraction(amount) * Fraction(r.randint(1, 4), 4)
        f = f + Flow.from_darts(ext.m, {d: amount for d in darts})
    return G, ext, emap, f


def cycles_by_side(graph, caps, roots):
    """Simple residual cycles of the planar part, split by which side the
    root face lies on.  Returns (root on the left, root on the right)."""
    D = nx.MultiDiGraph()
    for d in range(graph.dart_count):
        if caps[d] > 0 and graph.is_planar_edge(d >> 1):
            D.add_edge(graph.dart_tails[d], graph.dart_heads[d], key=d)
    left, right = [], []
    face_of = graph.face_of
    for cyc in nx.simple_cycles(D):
        # expand multigraph choices of parallel darts
        options = [list(D[a][b]) for a, b in zip(cyc, cyc[1:] + cyc[:1])]
        from itertools import product

        for darts in product(*options):
            if len(darts) == 2 and darts[0] >> 1 == darts[1] >> 1:
                continue
            on = {d >> 1 for d in darts}
            seen = {face_of[d] for d in darts}
            stack = list(seen)
            while stack:
                fc = stack.pop()
                for d in graph.faces[fc].darts:
                    if d >> 1 in on:
                        continue
                    nb = face_of[d ^ 1]
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            (left if seen & roots else right).append(darts)
    return left, right
