"""Combinatorial plane embeddings given by rotation systems.

Edges are numbered ``0..m-1``.  Edge ``e`` owns two darts: ``2e`` runs
tail -> head and ``2e + 1`` runs head -> tail, so ``rev(d) == d ^ 1``.
The rotation of a vertex lists the darts leaving it in clockwise order.

Following a dart ``d`` to its head and turning to the clockwise
successor of ``rev(d)`` keeps the face on the *left* of ``d``; that is
the face we assign to ``d``.  The dual arc of ``d`` therefore runs from
``face_of[d]`` (left) to ``face_of[rev(d)]`` (right).

Apex vertices sit outside the planar part.  Every edge touching an apex
is left out of rotations, faces and duals.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count
from typing import Iterable, Sequence

from .errors import EulerViolation, MalformedRotation, NegativeLength, UnboundedFlow
from .scalars import INF, Number, is_inf


def rev(d: int) -> int:
    return d ^ 1


def edge_of(d: int) -> int:
    return d >> 1


@dataclass(frozen=True)
class Face:
    index: int
    darts: tuple[int, ...]
    component: int


@dataclass(frozen=True, eq=False)
class Embedding:
    """A directed multigraph, optionally with a clockwise rotation system.

    ``rotation is None`` marks an abstract graph (split graphs, residual
    gadgets); asking such a graph for faces raises ``MalformedRotation``.
    """

    n: int
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    rotation: tuple[tuple[int, ...], ...] | None = None
    apices: frozenset[int] = frozenset()
    outer: int | None = None

    @property
    def m(self) -> int:
        return len(self.tails)

    @property
    def dart_count(self) -> int:
        return 2 * len(self.tails)

    def tail(self, d: int) -> int:
        return self.tails[d >> 1] if not d & 1 else self.heads[d >> 1]

    def head(self, d: int) -> int:
        return self.heads[d >> 1] if not d & 1 else self.tails[d >> 1]

    def is_planar_edge(self, e: int) -> bool:
        return self.tails[e] not in self.apices and self.heads[e] not in self.apices

    @cached_property
    def dart_tails(self) -> tuple[int, ...]:
        return tuple(self.tail(d) for d in range(self.dart_count))

    @cached_property
    def dart_heads(self) -> tuple[int, ...]:
        return tuple(self.head(d) for d in range(self.dart_count))

    @cached_property
    def out_darts(self) -> tuple[tuple[int, ...], ...]:
        """All darts leaving each vertex, apex darts included, by index."""
        out: list[list[int]] = [[] for _ in range(self.n)]
        for d, t in enumerate(self.dart_tails):
            out[t].append(d)
        return tuple(tuple(ds) for ds in out)

    def degree(self, v: int) -> int:
        return len(self.out_darts[v])

    @property
    def embedded(self) -> bool:
        return self.rotation is not None

    # -- faces ------------------------------------------------------------

    @cached_property
    def _rotation_position(self) -> dict[int, int]:
        if self.rotation is None:
            raise MalformedRotation("graph has no rotation system")
        return {d: i for rot in self.rotation for i, d in enumerate(rot)}

    def next_in_face(self, d: int) -> int:
        r = d ^ 1
        rot = self.rotation[self.dart_tails[r]]
        return rot[(self._rotation_position[r] + 1) % len(rot)]

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        return self._traced[0]

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        """Face left of each dart; ``-1`` for darts of apex edges."""
        return self._traced[1]

    @cached_property
    def components(self) -> tuple[int, ...]:
        """Connected component id of each vertex in the planar part (-1 for apices)."""
        return self._traced[2]

    @cached_property
    def root_faces(self) -> dict[int, int]:
        """Root (outer) face of each planar component that has edges."""
        return self._traced[3]

    @cached_property
    def _traced(self):
        if self.rotation is None:
            raise MalformedRotation("graph has no rotation system")
        face_of = [-1] * self.dart_count
        comp = _planar_components(self)
        faces: list[Face] = []
        for d in range(self.dart_count):
            if face_of[d] != -1 or not self.is_planar_edge(d >> 1):
                continue
            idx = len(faces)
            walk = []
            x = d
            while face_of[x] == -1:
                face_of[x] = idx
                walk.append(x)
                x = self.next_in_face(x)
            if x != d:
                raise MalformedRotation(f"face walk from dart {d} does not close")
            faces.append(Face(idx, tuple(walk), comp[self.dart_tails[d]]))
        roots: dict[int, int] = {}
        for f in faces:
            best = roots.get(f.component)
            if best is None or len(f.darts) > len(faces[best].darts):
                roots[f.component] = f.index
        if self.outer is not None and self.is_planar_edge(self.outer >> 1):
            roots[comp[self.dart_tails[self.outer]]] = face_of[self.outer]
        return tuple(faces), tuple(face_of), tuple(comp), roots

    def check_euler(self) -> None:
        faces, _, comp, _ = self._traced
        stats: dict[int, list[int]] = {}
        for v in range(self.n):
            if comp[v] >= 0:
                stats.setdefault(comp[v], [0, 0, 0])[0] += 1
        for e in range(self.m):
            if self.is_planar_edge(e):
                stats[comp[self.tails[e]]][1] += 1
        for f in faces:
            stats[f.component][2] += 1
        for c, (v, e, f) in stats.items():
            if e == 0:
                continue
            if v - e + f != 2:
                raise EulerViolation(
                    f"component {c}: V - E + F = {v} - {e} + {f} = {v - e + f}"
                )


def _planar_components(emb: Embedding) -> list[int]:
    parent = list(range(emb.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in range(emb.m):
        if emb.is_planar_edge(e):
            a, b = find(emb.tails[e]), find(emb.heads[e])
            if a != b:
                parent[max(a, b)] = min(a, b)
    ids: dict[int, int] = {}
    comp = []
    for v in range(emb.n):
        if v in emb.apices:
            comp.append(-1)
            continue
        comp.append(ids.setdefault(find(v), len(ids)))
    return comp


def validate_rotation(emb: Embedding) -> None:
    if emb.rotation is None:
        return
    if len(emb.rotation) != emb.n:
        raise MalformedRotation(f"expected {emb.n} rotation lists, got {len(emb.rotation)}")
    for v in range(emb.n):
        rot = emb.rotation[v]
        if v in emb.apices:
            if rot:
                raise MalformedRotation(f"apex {v} must have an empty rotation")
            continue
        expected = {d for d in emb.out_darts[v] if emb.is_planar_edge(d >> 1)}
        seen: set[int] = set()
        for d in rot:
            if not 0 <= d < emb.dart_count or emb.dart_tails[d] != v:
                raise MalformedRotation(f"rotation of vertex {v} lists dart {d} not leaving it")
            if d in seen:
                raise MalformedRotation(f"rotation of vertex {v} repeats dart {d}")
            if d not in expected:
                raise MalformedRotation(f"rotation of vertex {v} lists apex dart {d}")
            seen.add(d)
        missing = expected - seen
        if missing:
            raise MalformedRotation(
                f"rotation of vertex {v} is missing dart(s) {sorted(missing)}"
            )


def build_embedding(
    vertex_count: int,
    arcs: Sequence[tuple[int, int]],
    rotations: Sequence[Sequence[int]] | None,
    apices: Iterable[int] = (),
    outer: int | None = None,
) -> Embedding:
    """Build and validate an embedding.

    ``arcs`` holds ``(tail, head)`` pairs; ``rotations[v]`` the clockwise
    darts leaving ``v`` (apex edges excluded, apex lists empty).
    """
    for i, (t, h) in enumerate(arcs):
        if not (0 <= t < vertex_count and 0 <= h < vertex_count):
            raise MalformedRotation(f"arc {i} has an endpoint outside 0..{vertex_count - 1}")
        if t == h:
            raise MalformedRotation(f"arc {i} is a self-loop")
    emb = Embedding(
        n=vertex_count,
        tails=tuple(t for t, _ in arcs),
        heads=tuple(h for _, h in arcs),
        rotation=None if rotations is None else tuple(tuple(r) for r in rotations),
        apices=frozenset(apices),
        outer=outer,
    )
    if emb.rotation is not None:
        validate_rotation(emb)
        emb.check_euler()
    return emb


def faces(emb: Embedding) -> tuple[Face, ...]:
    return emb.faces


# -- duality ----------------------------------------------------------------


@dataclass(frozen=True)
class DualGraph:
    """One dual vertex per face and one dual arc per planar primal dart.

    ``arcs`` holds ``(primal_dart, from_face, to_face, length)``.
    """

    face_count: int
    arcs: tuple[tuple[int, int, int, Number], ...]
    roots: dict[int, int] = field(default_factory=dict)

    def distances(self) -> list[Number]:
        """Shortest distances from each component's root face."""
        return shortest_distances(self.face_count, self.arcs, self.roots.values())


def dual(emb: Embedding, lengths: Sequence[Number], *, reverse: bool = False) -> DualGraph:
    """Dual of the planar part; arc of dart ``d`` runs left face -> right face.

    With ``reverse=True`` every dual arc runs right -> left instead.
    """
    face_of = emb.face_of
    arcs = []
    for d in range(emb.dart_count):
        if face_of[d] < 0:
            continue
        ln = lengths[d]
        if ln < 0:
            raise NegativeLength(f"dart {d} has negative length {ln}")
        left, right = face_of[d], face_of[d ^ 1]
        if reverse:
            left, right = right, left
        arcs.append((d, left, right, ln))
    return DualGraph(len(emb.faces), tuple(arcs), dict(emb.root_faces))


def shortest_distances(
    node_count: int,
    arcs: Iterable[tuple[int, int, int, Number]],
    roots: Iterable[int],
) -> list[Number]:
    """Label-setting shortest paths with nonnegative exact lengths."""
    adj: list[list[tuple[int, Number]]] = [[] for _ in range(node_count)]
    for _, a, b, ln in arcs:
        if not is_inf(ln):
            adj[a].append((b, ln))
    dist: list[Number] = [INF] * node_count
    heap: list = []
    tie = count()
    for r in roots:
        dist[r] = 0
        heap.append((0, next(tie), r))
    heapq.heapify(heap)
    while heap:
        du, _, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for w, ln in adj[u]:
            nd = du + ln
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, next(tie), w))
    return dist


def require_finite(dist: Sequence[Number]) -> None:
    for i, x in enumerate(dist):
        if is_inf(x):
            raise UnboundedFlow(f"face {i} is unreachable in the dual: unbounded circulation")
