from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from planarflow.embedding import build_embedding
from planarflow.errors import DegenerateDerivative, NoSaddle, WrongTerminalCount
from planarflow.flow import Flow, FlowNetwork, excesses, flow_value, imbalances, inflows, is_arc_feasible, is_feasible
from planarflow.gadgets import build_extended, restrict
from planarflow.k3 import (
    K3Trace,
    almost_feasible_fixup,
    build_h_k3,
    crossing,
    initial_flow_k3,
    interpolate_beta,
    lift_h_flow,
    linearity,
    pipeline,
    solve_k3,
)
from planarflow.maxflow import max_flow
from planarflow.saddles import analyze
from planarflow.scalars import INF, is_inf

from support import family, geometric_rotation, nx_value


def k3_family(seed, **kw):
    return family(seed, k=3, regime="rational", U=10, **kw)


def gap_cases(limit=6):
    """Seeds whose first acyclic flow overloads a vertex."""
    out = []
    for seed in range(1, 2000, 2):
        G = k3_family(seed)
        if len(G.sources) != 2:
            continue
        ext, emap = build_extended(G)
        fo = initial_flow_k3(G, ext)
        bad = excesses(G, restrict(fo, emap))
        if bad:
            out.append((G, ext, emap, fo, next(iter(bad))))
            if len(out) == limit:
                break
    return out


@pytest.fixture(scope="module")
def gaps():
    return gap_cases()


def test_crossing():
    assert crossing(6, -3) == Fraction(2, 3)
    assert crossing(5, 0) == 1
    with pytest.raises(DegenerateDerivative):
        crossing(2, 2)


def test_wrong_terminal_count():
    with pytest.raises(WrongTerminalCount):
        solve_k3(family(0, k=4, sources=2, face_sources=False))


def test_disconnected_sources_give_zero():
    emb = build_embedding(3, [], [[], [], []])
    G = FlowNetwork(emb, (), (INF,) * 3, (0, 1), (2,))
    ext, emap = build_extended(G)
    assert initial_flow_k3(G, ext).is_zero()
    assert solve_k3(G).is_zero()


def test_fixup_on_a_hand_instance():
    # s1=0 -> x=1 -> t=2, and s2=3 -> x
    pos = [(0, 1), (1, 0), (2, 0), (0, -1)]
    arcs = [(0, 1), (1, 2), (3, 1)]
    emb = build_embedding(4, arcs, geometric_rotation(pos, arcs))
    G = FlowNetwork(emb, (5, 0) * 3, (INF, 2, INF, INF), (0, 3), (2,))
    out = almost_feasible_fixup(G, Flow((3, 3, 0)), 1, 1)
    assert out.values == (2, 2, 0)
    assert almost_feasible_fixup(G, Flow((3, 3, 0)), 1, 0) == Flow((3, 3, 0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1_000_000))
def test_initial_flow_is_maximum_and_acyclic(seed):
    G = k3_family(seed)
    if len(G.sources) != 2:
        G = k3_family(seed, sources=2)
    ext, emap = build_extended(G)
    fo = initial_flow_k3(G, ext)
    assert flow_value(ext, fo) == flow_value(ext, max_flow(ext))
    rep = analyze(G, restrict(fo, emap))
    assert rep.saddle_index_sum <= 1


def test_h_splits_terminals_and_extends(gaps):
    assert gaps
    for G, ext, emap, fo, x in gaps:
        H = build_h_k3(G, ext, emap, fo, x)
        assert len(H.net.sources) == len(H.in_blocks) <= 2
        assert len(H.net.sinks) == len(H.out_blocks) <= 2
        rot = emap.cycles[x].attached
        if len(H.in_blocks) == 2:
            order = sorted(rot.index(b[0]) for b in H.in_blocks + H.out_blocks)
            kinds = ["in" if any(rot[i] in b for b in H.in_blocks) else "out" for i in order]
            assert kinds in (["in", "out", "in", "out"], ["out", "in", "out", "in"])
        gh = max_flow(H.net)
        for scale in (Fraction(1, 3), 1):
            go = lift_h_flow(Flow(tuple(scale * v for v in gh.values)), H, emap, fo)
            assert not any(imbalances(ext.graph, go))
            assert is_arc_feasible(ext, fo + go)


def test_h_needs_an_overloaded_vertex(gaps):
    G, ext, emap, fo, x = gaps[0]
    free = next(v for v in emap.cycles if v not in excesses(G, restrict(fo, emap)))
    with pytest.raises(NoSaddle):
        build_h_k3(G, ext, emap, fo, free)


def test_interpolation_hits_the_capacity(gaps):
    """Raise the overloaded vertex's capacity halfway between its inflows
    at both ends; the root lands at one half and is exact."""
    ran = 0
    for G, ext, emap, fo, x in gaps:
        H = build_h_k3(G, ext, emap, fo, x)
        go = lift_h_flow(max_flow(H.net), H, emap, fo)
        F0 = pipeline(G, ext, emap, fo, go, 0)
        F1 = pipeline(G, ext, emap, fo, go, 1)
        a, b = inflows(G.graph, F0)[x], inflows(G.graph, F1)[x]
        if a == b:
            continue
        caps = list(G.vertex_cap)
        caps[x] = (a + b) / 2
        G2 = replace(G, vertex_cap=tuple(caps))
        ext2, emap2 = build_extended(G2)
        tr = K3Trace()
        out = interpolate_beta(G2, ext2, emap2, fo, go, x, x, tr)
        assert tr.state.beta0 == Fraction(1, 2)
        assert 0 <= tr.state.beta0 <= 1
        assert inflows(G2.graph, out)[x] == caps[x]
        assert all(tr.linearity.values())
        ran += 1
    assert ran


def test_linearity_and_endpoints(gaps):
    for G, ext, emap, fo, x in gaps:
        H = build_h_k3(G, ext, emap, fo, x)
        go = lift_h_flow(max_flow(H.net), H, emap, fo)
        assert pipeline(G, ext, emap, fo, go, 0) == restrict(fo, emap)
        assert all(linearity(G, ext, emap, fo, go).values())


def test_roomy_saddle_is_feasible_at_once():
    G = k3_family(3, sources=2)
    roomy = tuple(c if is_inf(c) else 10**9 for c in G.vertex_cap)
    G = replace(G, vertex_cap=roomy)
    tr = K3Trace()
    out = solve_k3(G, tr)
    assert tr.branch == "feasible"
    assert flow_value(G, out) == nx_value(G)


def test_one_source_two_sinks_is_reversed():
    G = k3_family(4, sources=1, face_sources=False)
    tr = K3Trace()
    out = solve_k3(G, tr)
    assert tr.reversed
    assert is_feasible(G, out).ok
    assert flow_value(G, out) == nx_value(G)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1_000_000))
def test_k3_matches_networkx(seed):
    G = k3_family(seed)
    out = solve_k3(G)
    assert is_feasible(G, out).ok
    assert flow_value(G, out) == nx_value(G)


def test_per_arc_linearity_can_fail():
    """Known instance: cancelling f + beta g reroutes flow between two
    parallel routes at a beta-dependent rate, so single arcs bend while
    the inflow at x stays a straight line."""
    import random

    from test_acceptance import instance

    G = instance(20_175, 40, 3, k=3, regime="rational", max_denominator=10,
                 U=random.Random(175).choice([5, 10, 50]))
    ext, emap = build_extended(G)
    fo = initial_flow_k3(G, ext)
    (x,) = excesses(G, restrict(fo, emap))
    H = build_h_k3(G, ext, emap, fo, x)
    go = lift_h_flow(max_flow(H.net), H, emap, fo)
    assert not any(linearity(G, ext, emap, fo, go).values())
    F = {b: pipeline(G, ext, emap, fo, go, b) for b in (0, Fraction(1, 2), 1)}
    mid = inflows(G.graph, F[Fraction(1, 2)])[x]
    assert 2 * mid == inflows(G.graph, F[0])[x] + inflows(G.graph, F[1])[x]


def test_refinement_when_inflow_bends(monkeypatch):
    """Inflow at x falls slowly, then fast; the straight-line root still
    overloads x, and one secant step inside the bracket lands on c(x)."""
    import planarflow.k3 as k3

    pos = [(0, 1), (1, 0), (2, 0), (0, -1)]
    arcs = [(0, 1), (1, 2), (3, 1)]
    emb = build_embedding(4, arcs, geometric_rotation(pos, arcs))
    G = FlowNetwork(emb, (5, 0) * 3, (INF, 2, INF, INF), (0, 3), (2,))

    def bent(G_, ext, emap, fo, go, beta):
        half = Fraction(1, 2)
        beta = Fraction(beta)
        a = 3 - beta / 2 if beta <= half else Fraction(11, 4) - Fraction(7, 2) * (beta - half)
        return Flow((a, a, 0))

    monkeypatch.setattr(k3, "pipeline", bent)
    monkeypatch.setattr(k3, "linearity", lambda *a, **k: {})
    tr = K3Trace()
    out = interpolate_beta(G, None, None, None, None, 1, 1, tr)
    assert tr.state.beta0 == Fraction(1, 2)
    assert tr.state.refinements == 1
    assert tr.state.beta == Fraction(5, 7)
    assert out.values == (2, 2, 0)
