"""Flow networks and flows over dart pairs.

A :class:`Flow` stores one signed number per edge: the net amount moving
along dart ``2e``.  The dart view ``f(d)`` is the positive part, so
``min(f(d), f(rev(d))) == 0`` holds by construction and edge-wise
addition is exactly ``(f+g)(e) = max(0, f(e)+g(e)-f(rev e)-g(rev e))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .embedding import Embedding
from .errors import ConservationViolation, InfeasibleInput, NegativeScalar, ValidationError
from .scalars import INF, Number, exact, is_inf, is_integral


@dataclass(frozen=True, eq=False)
class FlowNetwork:
    """Embedded graph with dart capacities, vertex capacities and terminals.

    ``cap`` is indexed by dart.  Input arcs carry their capacity on the
    forward dart and zero on the reverse one; undirected gadget edges
    carry the same capacity on both.  ``vertex_cap`` is ``INF`` for
    terminals and uncapacitated vertices.
    """

    graph: Embedding
    cap: tuple[Number, ...]
    vertex_cap: tuple[Number, ...]
    sources: tuple[int, ...]
    sinks: tuple[int, ...]
    notes: tuple[str, ...] = ()
    regime: str = ""  # "integer", "rational" or "" (infer from the numbers)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def terminals(self) -> frozenset[int]:
        return frozenset(self.sources) | frozenset(self.sinks)

    @property
    def k(self) -> int:
        return len(self.sources) + len(self.sinks)

    def is_terminal(self, v: int) -> bool:
        return v in self.terminals

    def arc_capacity(self, e: int) -> Number:
        return self.cap[2 * e]

    def has_vertex_capacities(self) -> bool:
        term = self.terminals
        return any(not is_inf(c) for v, c in enumerate(self.vertex_cap) if v not in term)

    def max_vertex_capacity(self) -> Number:
        term = self.terminals
        finite = [c for v, c in enumerate(self.vertex_cap) if v not in term and not is_inf(c)]
        return max(finite, default=0)

    def max_degree(self) -> int:
        return max((self.graph.degree(v) for v in range(self.n)), default=0)

    def numeric_regime(self) -> str:
        if self.regime:
            return self.regime
        values = list(self.cap) + list(self.vertex_cap)
        return "integer" if all(is_inf(x) or is_integral(x) for x in values) else "rational"

    def validate(self) -> None:
        """Check the input-network invariants (not required of gadget networks)."""
        g = self.graph
        if len(self.cap) != g.dart_count:
            raise ValidationError("capacity vector does not match dart count")
        if len(self.vertex_cap) != g.n:
            raise ValidationError("vertex capacity vector does not match vertex count")
        src, snk = set(self.sources), set(self.sinks)
        if src & snk:
            raise ValidationError(f"vertices {sorted(src & snk)} are both source and sink")
        for c in self.cap:
            if c < 0:
                raise ValidationError("negative arc capacity")
        for v in src | snk:
            if not is_inf(self.vertex_cap[v]):
                raise ValidationError(f"terminal {v} has finite capacity")
        for v, c in enumerate(self.vertex_cap):
            if c <= 0:
                raise ValidationError(f"vertex {v} has non-positive capacity {c}")
        for d in range(g.dart_count):
            if self.cap[d] > 0 and g.dart_heads[d] in src:
                raise ValidationError(f"source {g.dart_heads[d]} has an incoming arc")
            if self.cap[d] > 0 and g.dart_tails[d] in snk:
                raise ValidationError(f"sink {g.dart_tails[d]} has an outgoing arc")


def directed_capacities(arc_caps: Iterable[Number]) -> tuple[Number, ...]:
    """Dart capacities for directed arcs: ``c`` forward, ``0`` backward."""
    out: list[Number] = []
    for c in arc_caps:
        out.extend((c, 0))
    return tuple(out)


@dataclass(frozen=True)
class Flow:
    values: tuple[Number, ...]

    @classmethod
    def zero(cls, m: int) -> "Flow":
        return cls((0,) * m)

    @classmethod
    def from_darts(cls, m: int, amounts: dict[int, Number]) -> "Flow":
        vals: list[Number] = [0] * m
        for d, a in amounts.items():
            vals[d >> 1] += -a if d & 1 else a
        return cls(tuple(exact(v) for v in vals))

    @property
    def m(self) -> int:
        return len(self.values)

    def __getitem__(self, d: int) -> Number:
        """Amount on dart ``d`` (never negative)."""
        x = self.values[d >> 1]
        if d & 1:
            x = -x
        return x if x > 0 else 0

    def net(self, e: int) -> Number:
        return self.values[e]

    def __add__(self, other: "Flow") -> "Flow":
        return add_flows(self, other)

    def __sub__(self, other: "Flow") -> "Flow":
        return add_flows(self, other.reversed())

    def reversed(self) -> "Flow":
        return Flow(tuple(-x for x in self.values))

    def positive_darts(self) -> list[int]:
        return [2 * e + (x < 0) for e, x in enumerate(self.values) if x != 0]

    def is_zero(self) -> bool:
        return not any(self.values)

    def restrict(self, m: int) -> "Flow":
        return Flow(self.values[:m])

    def extend(self, m: int) -> "Flow":
        return Flow(self.values + (0,) * (m - len(self.values)))


def add_flows(f: Flow, g: Flow) -> Flow:
    if f.m != g.m:
        raise ValueError(f"flows live on different graphs ({f.m} vs {g.m} edges)")
    return Flow(tuple(exact(a + b) for a, b in zip(f.values, g.values)))


def scale_flow(c: Number, f: Flow) -> Flow:
    if c < 0:
        raise NegativeScalar(f"cannot scale a flow by {c}")
    return Flow(tuple(exact(c * x) for x in f.values))


# -- per-vertex quantities ----------------------------------------------------


def inflow(net: FlowNetwork | Embedding, f: Flow, v: int) -> Number:
    g = net.graph if isinstance(net, FlowNetwork) else net
    return sum((f[d ^ 1] for d in g.out_darts[v]), 0)


def outflow(net: FlowNetwork | Embedding, f: Flow, v: int) -> Number:
    g = net.graph if isinstance(net, FlowNetwork) else net
    return sum((f[d] for d in g.out_darts[v]), 0)


def net_outflow(g: Embedding, f: Flow, v: int) -> Number:
    return sum((f.values[d >> 1] if not d & 1 else -f.values[d >> 1] for d in g.out_darts[v]), 0)


def imbalances(g: Embedding, f: Flow) -> list[Number]:
    """Net outflow of every vertex, computed in one pass."""
    out: list[Number] = [0] * g.n
    for e, x in enumerate(f.values):
        if x:
            out[g.tails[e]] += x
            out[g.heads[e]] -= x
    return out


def inflows(g: Embedding, f: Flow) -> list[Number]:
    out: list[Number] = [0] * g.n
    for e, x in enumerate(f.values):
        if x > 0:
            out[g.heads[e]] += x
        elif x < 0:
            out[g.tails[e]] -= x
    return out


def conservation_violations(net: FlowNetwork, f: Flow) -> dict[int, Number]:
    term = net.terminals
    return {
        v: b for v, b in enumerate(imbalances(net.graph, f)) if b != 0 and v not in term
    }


def flow_value(net: FlowNetwork, f: Flow) -> Number:
    """Net amount leaving the sources; checked against the sinks."""
    bad = conservation_violations(net, f)
    if bad:
        v = min(bad)
        raise ConservationViolation(f"vertex {v} has imbalance {bad[v]}")
    imb = imbalances(net.graph, f)
    value = sum((imb[s] for s in net.sources), 0)
    at_sinks = -sum((imb[t] for t in net.sinks), 0)
    if value != at_sinks:
        raise ConservationViolation(f"sources send {value} but sinks receive {at_sinks}")
    return exact(value)


def excess(net: FlowNetwork, f: Flow, v: int) -> Number:
    c = net.vertex_cap[v]
    if is_inf(c) or net.is_terminal(v):
        return 0
    return exact(max(0, inflow(net, f, v) - c))


def excesses(net: FlowNetwork, f: Flow) -> dict[int, Number]:
    """Positive excesses only, keyed by vertex."""
    term = net.terminals
    out = {}
    for v, a in enumerate(inflows(net.graph, f)):
        c = net.vertex_cap[v]
        if v in term or is_inf(c):
            continue
        if a > c:
            out[v] = exact(a - c)
    return out


def max_excess(net: FlowNetwork, f: Flow) -> Number:
    return max(excesses(net, f).values(), default=0)


# -- residuals ----------------------------------------------------------------


def residual_capacities(cap: Sequence[Number], f: Flow) -> list[Number]:
    """``c(d) - f(d) + f(rev d)`` per dart; no feasibility check."""
    out: list[Number] = []
    for e, x in enumerate(f.values):
        out.append(exact(cap[2 * e] - x) if not is_inf(cap[2 * e]) else INF)
        out.append(exact(cap[2 * e + 1] + x) if not is_inf(cap[2 * e + 1]) else INF)
    return out


@dataclass(frozen=True, eq=False)
class ResidualNetwork:
    graph: Embedding
    cap: tuple[Number, ...]
    sources: tuple[int, ...] = ()
    sinks: tuple[int, ...] = ()

    def as_network(self) -> FlowNetwork:
        return FlowNetwork(
            self.graph, self.cap, (INF,) * self.graph.n, self.sources, self.sinks
        )


def residual(net: FlowNetwork, f: Flow) -> ResidualNetwork:
    for d in range(net.graph.dart_count):
        if f[d] > net.cap[d]:
            raise InfeasibleInput(f"dart {d} carries {f[d]} > capacity {net.cap[d]}")
    return ResidualNetwork(
        net.graph, tuple(residual_capacities(net.cap, f)), net.sources, net.sinks
    )


# -- feasibility --------------------------------------------------------------


@dataclass
class FeasibilityReport:
    conservation: dict[int, Number] = field(default_factory=dict)
    arcs: dict[int, Number] = field(default_factory=dict)
    vertices: dict[int, Number] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not (self.conservation or self.arcs or self.vertices)

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        out = [f"conservation vertex {v}: imbalance {b}" for v, b in sorted(self.conservation.items())]
        out += [f"arc capacity dart {d}: over by {x}" for d, x in sorted(self.arcs.items())]
        out += [f"vertex capacity {v}: over by {x}" for v, x in sorted(self.vertices.items())]
        return out


def is_feasible(net: FlowNetwork, f: Flow) -> FeasibilityReport:
    report = FeasibilityReport()
    report.conservation = conservation_violations(net, f)
    for d in range(net.graph.dart_count):
        a = f[d]
        if a > net.cap[d]:
            report.arcs[d] = exact(a - net.cap[d])
    report.vertices = excesses(net, f)
    return report


def is_arc_feasible(net: FlowNetwork, f: Flow) -> bool:
    return all(f[d] <= net.cap[d] for d in range(net.graph.dart_count))


# -- decomposition ------------------------------------------------------------


@dataclass(frozen=True)
class FlowComponent:
    kind: str  # "path" or "cycle"
    darts: tuple[int, ...]
    amount: Number

    def vertices(self, g: Embedding) -> list[int]:
        vs = [g.dart_tails[self.darts[0]]]
        vs.extend(g.dart_heads[d] for d in self.darts)
        return vs

    def as_flow(self, m: int) -> Flow:
        vals: list[Number] = [0] * m
        for d in self.darts:
            vals[d >> 1] += -self.amount if d & 1 else self.amount
        return Flow(tuple(exact(v) for v in vals))


def decompose(net: FlowNetwork, f: Flow) -> list[FlowComponent]:
    """Split ``f`` into source-to-sink path flows and cycle flows.

    Walks follow the positive dart of smallest index.  Every component
    zeroes at least one edge, so there are at most ``m`` of them.
    """
    bad = conservation_violations(net, f)
    if bad:
        v = min(bad)
        raise ConservationViolation(f"vertex {v} has imbalance {bad[v]}")
    g = net.graph
    vals = list(f.values)
    sinks = set(net.sinks)

    def amount(d: int) -> Number:
        x = vals[d >> 1]
        return -x if d & 1 else x

    def next_dart(v: int) -> int | None:
        for d in g.out_darts[v]:
            if amount(d) > 0:
                return d
        return None

    def subtract(darts: Sequence[int]) -> Number:
        b = min(amount(d) for d in darts)
        for d in darts:
            vals[d >> 1] += b if d & 1 else -b
        return exact(b)

    comps: list[FlowComponent] = []

    def walk(start: int, stop_at_sink: bool) -> None:
        path: list[int] = []
        pos = {start: 0}
        v = start
        while True:
            if stop_at_sink and v in sinks and path:
                b = subtract(path)
                comps.append(FlowComponent("path", tuple(path), b))
                return
            d = next_dart(v)
            if d is None:
                raise ConservationViolation(f"walk stuck at vertex {v}")
            w = g.dart_heads[d]
            if w in pos:
                cyc = path[pos[w]:] + [d]
                b = subtract(cyc)
                comps.append(FlowComponent("cycle", tuple(cyc), b))
                return
            path.append(d)
            pos[w] = len(path)
            v = w

    for s in net.sources:
        while next_dart(s) is not None:
            walk(s, stop_at_sink=True)
    for e in range(len(vals)):
        while vals[e] != 0:
            walk(g.tails[e] if vals[e] > 0 else g.heads[e], stop_at_sink=False)
    return comps
