import math

from hypothesis import given, settings, strategies as st

from planarflow.cycles import cancel_ccw_then_cw
from planarflow.flow import excesses, flow_value, is_feasible
from planarflow.gadgets import build_extended, restrict
from planarflow.maxflow import fixed_value_flow, max_flow
from planarflow.scaling import (
    PhaseRecord,
    ScalingTrace,
    doubled,
    improve_stage1,
    improve_stage2,
    iteration_cap,
    solve_scaling,
)
from planarflow.scalars import is_integral

from support import family, nx_value


def test_iteration_cap():
    assert iteration_cap(3, 1000) == math.floor(24 * (math.log2(3000) + 2))
    assert iteration_cap(2, 1) == 8 * 2 * 3


def test_phase_bound():
    rec = PhaseRecord(lam=10, pre=100, post=70, k=3, delta=4, X=(1,))
    assert rec.bound == 67 + 4


def test_doubling_doubles_every_finite_capacity():
    G = family(2, U=100)
    D = doubled(G)
    assert flow_value(D, max_flow(D)) == 2 * flow_value(G, max_flow(G))
    assert nx_value(D) == 2 * nx_value(G)


def gap_instance():
    """A seed whose extended network overshoots the optimum by a lot."""
    for seed in range(1, 400, 2):
        G = family(seed, U=1000, vertex_U=1000)
        ext, emap = build_extended(G)
        if flow_value(ext, max_flow(ext)) > nx_value(G) + 100:
            return G
    raise AssertionError("no gap instance found")


def test_stage_one_clears_the_overloaded_vertices():
    G = doubled(gap_instance())
    ext, emap = build_extended(G)
    lam = nx_value(G)
    fo = cancel_ccw_then_cw(ext, fixed_value_flow(ext, lam), G.m)
    X = tuple(sorted(excesses(G, restrict(fo, emap))))
    g = improve_stage1(G, ext, emap, fo, X)
    after = excesses(G, restrict(fo + g, emap))
    assert not set(after) & set(X)
    assert flow_value(ext, fo + g) == lam
    gk = improve_stage2(ext, g, G.k)
    assert all(is_integral(x) for x in gk.values)
    assert all(abs(a / G.k - b) < 1 for a, b in zip(g.values, gk.values))


def test_improvement_phases_contract():
    G = gap_instance()
    tr = ScalingTrace()
    out = solve_scaling(G, tr)
    assert flow_value(G, out) == nx_value(G)
    assert tr.phases, "expected at least one improvement phase"
    assert tr.stage_checks > 0
    for rec in tr.phases:
        assert rec.post <= rec.bound
    assert max(tr.loop_counts) <= tr.loop_cap


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 1_000_000), st.sampled_from([1000, 10**6]))
def test_scaling_matches_networkx(seed, U):
    G = family(seed, U=U, n=min(30, 12 + seed % 19), k=2 + seed % 4)
    out = solve_scaling(G)
    assert is_feasible(G, out).ok
    assert all(is_integral(x) for x in out.values)
    assert flow_value(G, out) == nx_value(G)
