import pytest
from hypothesis import given, settings, strategies as st

from planarflow.errors import ParamError
from planarflow.generate import GenParams, generate
from planarflow.instance import write_instance
from planarflow.scalars import is_inf


def test_same_seed_same_text():
    assert write_instance(generate(7, n=20, k=4)) == write_instance(generate(7, n=20, k=4))


def test_different_seeds_differ():
    assert write_instance(generate(1)) != write_instance(generate(2))


def test_nine_vertex_grid_is_valid():
    G = generate(0, n=9, k=3)
    G.validate()
    G.graph.check_euler()
    assert G.k == 3


def test_unit_regime():
    G = generate(3, n=16, k=3, U=1)
    assert all(c in (0, 1) for c in G.cap)
    assert all(is_inf(c) or c == 1 for c in G.vertex_cap)


@pytest.mark.parametrize(
    "kw",
    [dict(n=1), dict(k=1), dict(k=50, n=10), dict(U=0), dict(regime="real"),
     dict(density=0), dict(sources=3, k=3), dict(layout="ring"), dict(vertex_U=9, U=4)],
)
def test_bad_params(kw):
    with pytest.raises(ParamError):
        GenParams(**kw).check()


@settings(max_examples=40, deadline=None)
@given(
    st.integers(0, 10**6), st.integers(4, 40), st.integers(2, 6),
    st.sampled_from(["grid", "web"]), st.booleans(), st.booleans(),
)
def test_generated_instances_validate(seed, n, k, layout, inner, face_sources):
    k = min(k, n - 1)
    kw = dict(n=n, k=k, layout=layout, inner_terminals=inner)
    if face_sources and k >= 3:
        kw.update(face_sources=True, sources=2)
    try:
        G = generate(seed, **kw)
    except ParamError:
        return
    G.validate()
    G.graph.check_euler()
    g = G.graph
    for s in G.sources:
        assert all(g.dart_heads[d] != s or G.cap[d] == 0 for d in range(g.dart_count))
    for t in G.sinks:
        assert all(g.dart_tails[d] != t or G.cap[d] == 0 for d in range(g.dart_count))
