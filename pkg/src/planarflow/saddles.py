"""Alternation numbers, indices and saddles of a flow graph.

Only darts that carry flow are visible.  Walking clockwise around a
vertex, ``alpha(v)`` counts the in/out direction changes; the index is
``alpha/2 - 1`` and a saddle is a vertex of index at least 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cycles import find_flow_cycle
from .embedding import Embedding
from .errors import NotAcyclic
from .flow import Flow, FlowNetwork, excesses
from .scalars import Number


@dataclass(frozen=True)
class SaddleReport:
    alpha: tuple[int, ...]
    excess: dict[int, Number]

    @property
    def index(self) -> tuple[int, ...]:
        return tuple(a // 2 - 1 for a in self.alpha)

    @property
    def saddles(self) -> tuple[int, ...]:
        return tuple(v for v, a in enumerate(self.alpha) if a >= 4)

    @property
    def saddle_index_sum(self) -> int:
        return sum(a // 2 - 1 for a in self.alpha if a >= 4)

    @property
    def infeasible(self) -> tuple[int, ...]:
        return tuple(sorted(self.excess))


def _alternations(dirs: list[bool]) -> int:
    return sum(1 for i in range(len(dirs)) if dirs[i] != dirs[i - 1])


def alternation(graph: Embedding, f: Flow, v: int) -> int:
    dirs = [f[d] > 0 for d in graph.rotation[v] if f[d] > 0 or f[d ^ 1] > 0]
    return _alternations(dirs)


def analyze(net: FlowNetwork, f: Flow) -> SaddleReport:
    g = net.graph
    if find_flow_cycle(g, f) is not None:
        raise NotAcyclic("saddle analysis needs an acyclic flow")
    alpha = tuple(alternation(g, f, v) for v in range(g.n))
    return SaddleReport(alpha, excesses(net, f))


def flow_subgraph(graph: Embedding, f: Flow) -> tuple[Embedding, list[int]]:
    """Plane subgraph of the edges carrying flow.

    Returns the subgraph and, per subgraph edge, the original edge.
    """
    keep = [e for e in range(graph.m) if f.values[e] != 0 and graph.is_planar_edge(e)]
    new_of = {e: i for i, e in enumerate(keep)}
    rotation = []
    for v in range(graph.n):
        rot = graph.rotation[v] if v not in graph.apices else ()
        rotation.append(tuple(2 * new_of[d >> 1] + (d & 1) for d in rot if (d >> 1) in new_of))
    sub = Embedding(
        n=graph.n,
        tails=tuple(graph.tails[e] for e in keep),
        heads=tuple(graph.heads[e] for e in keep),
        rotation=tuple(rotation),
        apices=graph.apices,
    )
    return sub, keep


@dataclass(frozen=True)
class IndexIdentity:
    """Per component of the flow subgraph: corner count and index sums."""

    corners: dict[int, int]
    vertex_alternations: dict[int, int]
    face_alternations: dict[int, int]
    index_sums: dict[int, Fraction]

    @property
    def holds(self) -> bool:
        return all(
            self.corners[c] == self.vertex_alternations[c] + self.face_alternations[c]
            and self.index_sums[c] == -2
            for c in self.corners
        )


def index_identity(net: FlowNetwork, f: Flow) -> IndexIdentity:
    sub, keep = flow_subgraph(net.graph, f)
    sf = Flow(tuple(f.values[e] for e in keep))
    comp = sub.components
    corners: dict[int, int] = {}
    va: dict[int, int] = {}
    fa: dict[int, int] = {}
    sums: dict[int, Fraction] = {}
    for v in range(sub.n):
        if v in sub.apices or not sub.rotation[v]:
            continue
        c = comp[v]
        a = alternation(sub, sf, v)
        corners[c] = corners.get(c, 0) + len(sub.rotation[v])
        va[c] = va.get(c, 0) + a
        sums[c] = sums.get(c, Fraction(0)) + Fraction(a, 2) - 1
    for face in sub.faces:
        c = face.component
        fwd = [sf[d] > 0 for d in face.darts]
        a = _alternations(fwd)
        fa[c] = fa.get(c, 0) + a
        sums[c] = sums.get(c, Fraction(0)) + Fraction(a, 2) - 1
    for c in corners:
        fa.setdefault(c, 0)
    return IndexIdentity(corners, va, fa, sums)


def check_index_identity(net: FlowNetwork, f: Flow) -> bool:
    """Vertex and face indices of every flow component sum to -2."""
    return index_identity(net, f).holds


def face_indices(net: FlowNetwork, f: Flow) -> list[int]:
    sub, keep = flow_subgraph(net.graph, f)
    sf = Flow(tuple(f.values[e] for e in keep))
    return [_alternations([sf[d] > 0 for d in face.darts]) // 2 - 1 for face in sub.faces]
