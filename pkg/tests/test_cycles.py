from fractions import Fraction

from hypothesis import given, settings, strategies as st

from planarflow.cycles import (
    _clamped_residual,
    cancel_ccw_then_cw,
    cancel_generic,
    cancel_pass,
    find_flow_cycle,
    is_acyclic,
    potential_circulation,
)
from planarflow.flow import Flow, flow_value, imbalances, is_arc_feasible
from planarflow.gadgets import build_split, restrict
from planarflow.maxflow import max_flow

from support import cycles_by_side, cyclic_extended_flow, family, geometric_rotation


def test_find_flow_cycle_on_triangle():
    from planarflow.embedding import build_embedding

    pos = [(0, 0), (2, 0), (1, 2)]
    arcs = [(0, 1), (1, 2), (2, 0)]
    emb = build_embedding(3, arcs, geometric_rotation(pos, arcs))
    f = Flow((1, 1, 1))
    cyc = find_flow_cycle(emb, f)
    assert sorted(cyc) == [0, 2, 4]
    assert not is_acyclic(emb, f)
    assert is_acyclic(emb, Flow((1, 1, 0)))
    assert find_flow_cycle(emb, Flow((-1, -1, -1))) is not None


def test_potential_circulation_is_a_circulation():
    G = family(11)
    caps = [1] * G.graph.dart_count
    g = potential_circulation(G.graph, caps)
    assert not any(imbalances(G.graph, g))
    assert all(g[d] <= caps[d] for d in range(G.graph.dart_count))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 1_000_000))
def test_cancellation_properties(seed):
    G, ext, emap, f = cyclic_extended_flow(seed)
    out = cancel_ccw_then_cw(ext, f, G.m)
    assert is_arc_feasible(ext, out)
    assert flow_value(ext, out) == flow_value(ext, f)
    assert is_acyclic(G.graph, restrict(out, emap))
    for e in range(G.m):
        a, b = f.values[e], out.values[e]
        assert a * b >= 0 and abs(b) <= abs(a)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1_000_000))
def test_each_pass_clears_one_orientation(seed):
    G = family(seed, n=6, k=2, sources=None, face_sources=False, layout="grid")
    G, ext, emap, f = cyclic_extended_flow(seed, G)
    if len(ext.graph.faces) > 14:
        return
    roots = set(ext.graph.root_faces.values())
    f1 = cancel_pass(ext, f, G.m, reverse=False)
    left, _ = cycles_by_side(ext.graph, _clamped_residual(ext, f1, G.m), roots)
    assert left == []
    f2 = cancel_pass(ext, f1, G.m, reverse=True)
    _, right = cycles_by_side(ext.graph, _clamped_residual(ext, f2, G.m), roots)
    assert right == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1_000_000))
def test_generic_cancel_on_split_graph(seed):
    G = family(seed)
    bar, _ = build_split(G)
    f = max_flow(bar)
    out = cancel_generic(bar, f)
    assert is_acyclic(bar.graph, out)
    assert flow_value(bar, out) == flow_value(bar, f)
    assert all(out[d] <= f[d] for d in range(bar.graph.dart_count))


def test_generic_cancel_exact_fractions():
    from planarflow.embedding import build_embedding

    pos = [(0, 0), (2, 0), (1, 2)]
    arcs = [(0, 1), (1, 2), (2, 0)]
    emb = build_embedding(3, arcs, geometric_rotation(pos, arcs))
    out = cancel_generic(emb, Flow((Fraction(1, 3), Fraction(1, 2), Fraction(1, 3))))
    assert out.values == (0, Fraction(1, 6), 0)
