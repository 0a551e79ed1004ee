"""Seeded random planar instances.

Vertices sit on a grid (row-major, the last row possibly partial) and
may be joined to their right, lower and lower-right neighbours.  Each
edge survives with probability ``density``; a few get an antiparallel
twin drawn as a slightly bent second curve.  Rotations come from the
drawing: darts sorted by decreasing angle, which is clockwise.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .embedding import build_embedding
from .errors import ParamError
from .flow import FlowNetwork
from .scalars import INF, Number

_BEND = 0.05


@dataclass(frozen=True)
class GenParams:
    n: int = 16
    k: int = 3
    U: int = 8
    vertex_U: int | None = None  # bound for vertex capacities; defaults to U
    regime: str = "integer"
    density: float = 0.85
    infinite_share: float = 0.2
    antiparallel: float = 0.1
    sources: int | None = None
    inner_terminals: bool = False
    max_denominator: int = 10
    hub_share: float = 0.0  # share of vertices whose arcs alternate in/out around them
    layout: str = "grid"  # or "web": concentric rings around a hub vertex
    terminals: tuple[tuple[int, ...], tuple[int, ...]] | None = None  # explicit (sources, sinks)
    open_sinks: bool = False  # sink neighbours uncapacitated, arcs into sinks at capacity U
    face_sources: bool = False  # sources are extra vertices inside triangular faces

    def check(self) -> None:
        if self.n < 2:
            raise ParamError("n must be at least 2")
        if not 2 <= self.k <= self.n:
            raise ParamError("k must lie in 2..n")
        if self.U < 1 or (self.vertex_U is not None and not 1 <= self.vertex_U <= self.U):
            raise ParamError("U must be positive and vertex_U must lie in 1..U")
        if self.regime not in ("integer", "rational"):
            raise ParamError(f"unknown regime {self.regime!r}")
        if not 0 < self.density <= 1:
            raise ParamError("density must lie in (0, 1]")
        if self.sources is not None and not 1 <= self.sources < self.k:
            raise ParamError("sources must leave room for at least one sink")
        if self.layout not in ("grid", "web"):
            raise ParamError(f"unknown layout {self.layout!r}")
        if self.layout == "web" and self.n < 4:
            raise ParamError("the web layout needs n >= 4")
        if self.max_denominator < 1:
            raise ParamError("max_denominator must be positive")


def _capacity(rng: random.Random, p: GenParams, top: int) -> Number:
    if top == 1:
        return 1
    if p.regime == "rational":
        q = rng.randint(1, p.max_denominator)
        x = Fraction(rng.randint(1, top * q), q)
        return int(x) if x.denominator == 1 else x
    return rng.randint(1, top)


def _outer_vertices(pos, edges) -> list[int]:
    """Vertices on the boundary of the drawing's unbounded face, walked
    from the topmost-leftmost vertex."""
    emb = _embed(pos, edges, len(pos))
    best, best_area = None, 0.0
    for face in emb.faces:
        area = 0.0
        for d in face.darts:
            (x1, y1), (x2, y2) = pos[emb.dart_tails[d]], pos[emb.dart_heads[d]]
            area += x1 * y2 - x2 * y1
        if best is None or area < best_area:
            best, best_area = face, area
    if best is None:
        return []
    seen: list[int] = []
    for d in best.darts:
        v = emb.dart_tails[d]
        if v not in seen:
            seen.append(v)
    return seen


def _angle(pos, u, v, bend) -> float:
    (x1, y1), (x2, y2) = pos[u], pos[v]
    return math.atan2(y2 - y1, x2 - x1) + bend


def _rotations(pos, edges, n):
    darts: list[list[tuple[float, int]]] = [[] for _ in range(n)]
    for e, (u, v, bend) in enumerate(edges):
        darts[u].append((_angle(pos, u, v, bend), 2 * e))
        darts[v].append((_angle(pos, v, u, -bend), 2 * e + 1))
    return [[d for _, d in sorted(ds, key=lambda t: -t[0])] for ds in darts]


def _embed(pos, edges, n, outer=None):
    return build_embedding(n, [(u, v) for u, v, _ in edges], _rotations(pos, edges, n), outer=outer)


def _outer_dart(pos, edges, n):
    emb = _embed(pos, edges, n)
    best, best_area = None, 0.0
    for face in emb.faces:
        area = sum(
            pos[emb.dart_tails[d]][0] * pos[emb.dart_heads[d]][1]
            - pos[emb.dart_heads[d]][0] * pos[emb.dart_tails[d]][1]
            for d in face.darts
        )
        if best is None or area < best_area:
            best, best_area = face, area
    return None if best is None else best.darts[0]


def _grid(n: int):
    cols = max(2, math.isqrt(n))
    pos = [(float(i % cols), -float(i // cols)) for i in range(n)]

    def at(r, c):
        i = r * cols + c
        return i if 0 <= c < cols and 0 <= i < n else None

    cand = []
    for i in range(n):
        r, c = divmod(i, cols)
        for j in (at(r, c + 1), at(r + 1, c), at(r + 1, c + 1)):
            if j is not None:
                cand.append((i, j))
    return n, pos, cand


def _web(n: int):
    """Vertex 0 at the centre, then rings of ``L`` vertices joined by
    spokes and diagonals.  Uses ``1 + R*L <= n`` vertices."""
    L = max(4, math.isqrt(n - 1))
    R = max(1, (n - 1) // L)
    grow = 1.5 / math.cos(math.pi / L)
    pos = [(0.0, 0.0)]
    for r in range(R):
        for j in range(L):
            a = 2 * math.pi * j / L + math.pi * r / L
            pos.append((grow**r * math.cos(a), grow**r * math.sin(a)))

    def at(r, j):
        return 1 + r * L + j % L

    cand = [(0, at(0, j)) for j in range(L)]
    for r in range(R):
        for j in range(L):
            cand.append((at(r, j), at(r, j + 1)))
            if r + 1 < R:
                cand.append((at(r, j), at(r + 1, j)))
                cand.append((at(r, j + 1), at(r + 1, j)))
    return 1 + R * L, pos, cand


def _place_face_sources(rng: random.Random, pos: list, skel: list, count: int) -> list[int]:
    """Drop ``count`` new vertices into bounded triangular faces, each wired
    to one or two corners.  Later ones prefer faces touching an earlier
    face, so sources tend to share a gateway vertex."""
    emb = _embed(pos, [(u, v, 0.0) for u, v in skel], len(pos))
    tris = []
    for face in emb.faces:
        if len(face.darts) != 3:
            continue
        corners = [emb.dart_tails[d] for d in face.darts]
        (x1, y1), (x2, y2), (x3, y3) = (pos[c] for c in corners)
        if (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1) > 0:
            tris.append(corners)
    if len(tris) < count:
        raise ParamError("not enough triangular faces for face sources")
    rng.shuffle(tris)
    placed: list[int] = []
    used: list[list[int]] = []
    for _ in range(count):
        near = [t for t in tris if t not in used and used and set(t) & set(used[-1])]
        pick = near[0] if near and rng.random() < 0.8 else next(t for t in tris if t not in used)
        used.append(pick)
        v = len(pos)
        pos.append(tuple(sum(pos[c][i] for c in pick) / 3 for i in range(2)))
        shared = [c for c in pick if len(used) > 1 and c in used[-2]]
        wired = [rng.choice(shared)] if shared else []
        others = [c for c in pick if c not in wired]
        wired += rng.sample(others, rng.choice((0, 1)) if wired else rng.choice((1, 1, 2)))
        for c in wired:
            skel.append((v, c))
        placed.append(v)
    return placed


def generate(seed: int, params: GenParams | None = None, **kw) -> FlowNetwork:
    p = params if params is not None else GenParams(**kw)
    p.check()
    rng = random.Random(seed)
    if p.layout == "web":
        n, pos, candidates = _web(p.n)
    else:
        n, pos, candidates = _grid(p.n)
    skel = [(u, v) for u, v in candidates if rng.random() < p.density] or candidates[:1]
    k1 = p.sources if p.sources is not None else rng.randint(1, p.k - 1)

    # terminals on the unbounded face of the skeleton drawing
    plain = [(u, v, 0.0) for u, v in skel]
    pool = list(range(n)) if p.inner_terminals else _outer_vertices(pos, plain)
    if len(pool) < p.k:
        pool += [v for v in range(n) if v not in pool]
    if p.face_sources:
        sources = set(_place_face_sources(rng, pos, skel, k1))
        n = len(pos)
        sinks = set(rng.sample(pool, p.k - k1))
    else:
        terms = rng.sample(pool, p.k)
        sources = set(terms[:k1])
        sinks = set(terms[k1:])
    if p.terminals is not None:
        sources, sinks = set(p.terminals[0]), set(p.terminals[1])
        if len(sources) + len(sinks) != p.k or sources & sinks or max(sources | sinks) >= n:
            raise ParamError("explicit terminals must be k distinct vertices")

    # Hubs: orient incident edges alternately in and out around the vertex,
    # which invites saddles.  An edge keeps the first orientation it gets.
    forced: dict[tuple[int, int], bool] = {}
    hubs = [v for v in range(n) if v not in sources and v not in sinks and rng.random() < p.hub_share]
    for h in hubs:
        inc = [(u, v) for u, v in skel if h in (u, v)]
        inc.sort(key=lambda uv: -_angle(pos, h, uv[0] + uv[1] - h, 0.0))
        for i, uv in enumerate(inc):
            if uv not in forced:
                forced[uv] = (uv[0] == h) == (i % 2 == 0)

    edges = []
    for u, v in skel:
        if (u, v) in forced:
            if not forced[(u, v)]:
                u, v = v, u
        elif rng.random() < 0.5:
            u, v = v, u
        if (u in sources and v in sources) or (u in sinks and v in sinks):
            continue
        if v in sources or u in sinks:
            u, v = v, u
        twin = rng.random() < p.antiparallel and not (
            {u, v} & sources or {u, v} & sinks
        )
        if twin:
            edges.append((u, v, _BEND))
            edges.append((v, u, _BEND))
        else:
            edges.append((u, v, 0.0))

    emb = _embed(pos, edges, n, outer=_outer_dart(pos, edges, n))
    cap = []
    for u, v, _ in edges:
        c = _capacity(rng, p, p.U)
        cap.extend((p.U if p.open_sinks and v in sinks else c, 0))
    near_sink = {u for u, v, _ in edges if v in sinks} if p.open_sinks else set()
    vcap: list[Number] = []
    for v in range(n):
        c = _capacity(rng, p, p.vertex_U or p.U)
        if v in sources or v in sinks or v in near_sink or rng.random() < p.infinite_share:
            c = INF
        vcap.append(c)
    net = FlowNetwork(
        emb, tuple(cap), tuple(vcap), tuple(sorted(sources)), tuple(sorted(sinks)),
        regime=p.regime,
    )
    net.validate()
    return net
