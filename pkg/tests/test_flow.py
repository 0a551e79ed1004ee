from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from planarflow.errors import ConservationViolation, InfeasibleInput, NegativeScalar
from planarflow.flow import (
    Flow,
    decompose,
    excess,
    excesses,
    flow_value,
    inflow,
    is_feasible,
    residual,
    scale_flow,
)
from planarflow.maxflow import max_flow
from planarflow.oracle import oracle_maxflow

from support import family, line_network


def test_dart_amounts_follow_sign():
    f = Flow((3, -2, 0))
    assert [f[d] for d in range(6)] == [3, 0, 0, 2, 0, 0]
    assert f.positive_darts() == [0, 3]


def test_from_darts_nets_opposite_darts():
    f = Flow.from_darts(2, {0: 5, 1: 2, 3: 1})
    assert f.values == (3, -1)


def test_arithmetic_is_exact():
    f = Flow((Fraction(1, 3), 1))
    g = f + f + f
    assert g.values == (1, 3)
    assert (g - g).is_zero()
    assert scale_flow(Fraction(1, 2), g).values == (Fraction(1, 2), Fraction(3, 2))


def test_negative_scale_rejected():
    with pytest.raises(NegativeScalar):
        scale_flow(-1, Flow((1,)))


def test_value_and_excess_on_a_line():
    G = line_network([4, 4], [float("inf"), 3, float("inf")])
    f = Flow((4, 4))
    assert flow_value(G, f) == 4
    assert inflow(G, f, 1) == 4
    assert excess(G, f, 1) == 1
    assert excesses(G, f) == {1: 1}
    report = is_feasible(G, f)
    assert not report.ok
    assert report.lines() == ["vertex capacity 1: over by 1"]


def test_conservation_violation_detected():
    G = line_network([4, 4], [float("inf")] * 3)
    with pytest.raises(ConservationViolation):
        flow_value(G, Flow((4, 3)))
    assert is_feasible(G, Flow((4, 3))).conservation == {1: -1}  # net outflow


def test_residual_rejects_overfull_arc():
    G = line_network([4, 4], [float("inf")] * 3)
    with pytest.raises(InfeasibleInput):
        residual(G, Flow((5, 5)))
    r = residual(G, Flow((1, 1)))
    assert r.cap == (3, 1, 3, 1)


def test_terminals_have_no_excess():
    G = line_network([4], [1, 1])
    assert excesses(G, Flow((4,))) == {}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_decomposition_reassembles_the_flow(seed):
    G = family(seed)
    f = max_flow(G)
    comps = decompose(G, f)
    total = Flow.zero(G.m)
    for c in comps:
        assert c.amount > 0
        total = total + c.as_flow(G.m)
    assert total == f
    assert len(comps) <= G.m
    paths = sum(c.amount for c in comps if c.kind == "path")
    assert paths == flow_value(G, f)
    for c in comps:
        vs = c.vertices(G.graph)
        if c.kind == "path":
            assert vs[0] in G.sources and vs[-1] in G.sinks
        else:
            assert vs[0] == vs[-1]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_oracle_flow_is_feasible(seed):
    G = family(seed)
    value, f = oracle_maxflow(G)
    assert is_feasible(G, f).ok
    assert flow_value(G, f) == value
