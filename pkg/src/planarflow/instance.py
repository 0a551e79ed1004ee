"""Plain-text instance and flow-dump formats.

Instance::

    planarflow 1
    regime integer            # or: rational
    vertices 4
    arcs 4
    vertex 0 inf source
    vertex 1 3
    vertex 2 5/2
    vertex 3 inf sink
    arc 0 0 1 4               # id tail head capacity
    ...
    rotation 1 -0 +1 +2       # darts leaving 1, clockwise; +a: arc a leaves, -a: arc a enters
    outer +0                  # optional: a dart on the outer face
    note free text

Blank lines and ``#`` comments are ignored.  A source or sink with a
finite capacity ``c`` is rewritten on input: a fresh terminal is added
behind an arc of capacity ``c`` and the rewrite is kept as a ``note``.

Flow dump: one ``tail head value`` line per arc, in arc order.
"""

from __future__ import annotations

from dataclasses import replace

from .embedding import build_embedding
from .errors import MalformedRotation, ParseError, EulerViolation, ValidationError
from .flow import Flow, FlowNetwork
from .scalars import INF, Number, format_number, is_inf, is_integral, parse_number

MAGIC = "planarflow"
VERSION = "1"


class _Line:
    def __init__(self, number: int, raw: str):
        self.number = number
        self.raw = raw
        text = raw.split("#", 1)[0]
        self.tokens: list[tuple[str, int]] = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            j = i
            while j < len(text) and not text[j].isspace():
                j += 1
            self.tokens.append((text[i:j], i + 1))
            i = j

    def fail(self, msg: str, tok: int = 0) -> ParseError:
        col = self.tokens[tok][1] if tok < len(self.tokens) else len(self.raw) + 1
        return ParseError(msg, self.number, col)

    def arity(self, n: int, extra: int = 0) -> None:
        if not n <= len(self.tokens) <= n + extra:
            raise self.fail(f"'{self.tokens[0][0]}' expects {n - 1} fields", min(len(self.tokens), n))

    def int_at(self, i: int, lo: int = 0, hi: int | None = None) -> int:
        tok = self.tokens[i][0]
        try:
            v = int(tok)
        except ValueError:
            raise self.fail(f"expected an integer, got {tok!r}", i) from None
        if v < lo or (hi is not None and v >= hi):
            raise self.fail(f"{v} is out of range", i)
        return v

    def number_at(self, i: int, integer: bool) -> Number:
        tok = self.tokens[i][0]
        try:
            v = parse_number(tok)
        except (ValueError, ZeroDivisionError):
            raise self.fail(f"expected a number, got {tok!r}", i) from None
        if v < 0:
            raise self.fail(f"negative capacity {tok}", i)
        if integer and not (is_inf(v) or is_integral(v)):
            raise self.fail(f"non-integer {tok} in an integer instance", i)
        return v


def _dart_ref(line: _Line, i: int, m: int) -> int:
    tok = line.tokens[i][0]
    if len(tok) < 2 or tok[0] not in "+-":
        raise line.fail(f"expected a dart like +3 or -3, got {tok!r}", i)
    try:
        a = int(tok[1:])
    except ValueError:
        raise line.fail(f"expected a dart like +3 or -3, got {tok!r}", i) from None
    if not 0 <= a < m:
        raise line.fail(f"unknown arc {a}", i)
    return 2 * a + (tok[0] == "-")


def _dart_text(d: int) -> str:
    return f"{'-' if d & 1 else '+'}{d >> 1}"


def parse_instance(text: str) -> FlowNetwork:
    lines = [_Line(i + 1, raw) for i, raw in enumerate(text.splitlines())]
    lines = [ln for ln in lines if ln.tokens]
    if not lines:
        raise ParseError("empty instance", 1, 1)
    it = iter(lines)
    head = next(it)
    if head.tokens[0][0] != MAGIC:
        raise head.fail(f"expected '{MAGIC} {VERSION}' header")
    head.arity(2)
    if head.tokens[1][0] != VERSION:
        raise head.fail(f"unsupported version {head.tokens[1][0]!r}", 1)

    regime = ""
    n = m = None
    vcap: list[Number | None] = []
    role: list[str] = []
    arcs: list[tuple[int, int] | None] = []
    acap: list[Number] = []
    rotations: list[list[int] | None] = []
    outer = None
    notes: list[str] = []
    last_line = head
    for ln in it:
        last_line = ln
        kw = ln.tokens[0][0]
        if kw == "regime":
            ln.arity(2)
            regime = ln.tokens[1][0]
            if regime not in ("integer", "rational"):
                raise ln.fail(f"unknown regime {regime!r}", 1)
        elif kw == "vertices":
            ln.arity(2)
            n = ln.int_at(1)
            vcap, role, rotations = [None] * n, [""] * n, [None] * n
        elif kw == "arcs":
            ln.arity(2)
            m = ln.int_at(1)
            arcs, acap = [None] * m, [0] * m
        elif kw == "vertex":
            if n is None:
                raise ln.fail("'vertex' before 'vertices'")
            ln.arity(3, 1)
            v = ln.int_at(1, 0, n)
            if vcap[v] is not None:
                raise ln.fail(f"vertex {v} defined twice", 1)
            vcap[v] = ln.number_at(2, regime != "rational")
            if len(ln.tokens) == 4:
                r = ln.tokens[3][0]
                if r not in ("source", "sink"):
                    raise ln.fail(f"unknown role {r!r}", 3)
                role[v] = r
        elif kw == "arc":
            if n is None or m is None:
                raise ln.fail("'arc' before 'vertices' and 'arcs'")
            ln.arity(5)
            a = ln.int_at(1, 0, m)
            if arcs[a] is not None:
                raise ln.fail(f"arc {a} defined twice", 1)
            t, h = ln.int_at(2, 0, n), ln.int_at(3, 0, n)
            if t == h:
                raise ln.fail(f"arc {a} is a self-loop", 2)
            arcs[a] = (t, h)
            acap[a] = ln.number_at(4, regime != "rational")
        elif kw == "rotation":
            if n is None or m is None:
                raise ln.fail("'rotation' before 'vertices' and 'arcs'")
            if len(ln.tokens) < 2:
                raise ln.fail("'rotation' needs a vertex")
            v = ln.int_at(1, 0, n)
            if rotations[v] is not None:
                raise ln.fail(f"rotation of vertex {v} given twice", 1)
            rotations[v] = [_dart_ref(ln, i, m) for i in range(2, len(ln.tokens))]
        elif kw == "outer":
            if m is None:
                raise ln.fail("'outer' before 'arcs'")
            ln.arity(2)
            outer = _dart_ref(ln, 1, m)
        elif kw == "note":
            notes.append(ln.raw.split("note", 1)[1].strip())
        else:
            raise ln.fail(f"unknown keyword {kw!r}")

    if n is None or m is None:
        raise last_line.fail("missing 'vertices' or 'arcs' line")
    for v in range(n):
        if vcap[v] is None:
            raise last_line.fail(f"vertex {v} is never defined")
    for a in range(m):
        if arcs[a] is None:
            raise last_line.fail(f"arc {a} is never defined")
    rot = [r if r is not None else [] for r in rotations]
    # Check dart-to-vertex agreement here for a located error message.
    for ln in lines:
        if ln.tokens[0][0] == "rotation":
            v = int(ln.tokens[1][0])
            for i in range(2, len(ln.tokens)):
                d = _dart_ref(ln, i, m)
                t, h = arcs[d >> 1]
                if (h if d & 1 else t) != v:
                    raise ln.fail(f"dart {ln.tokens[i][0]} does not leave vertex {v}", i)

    return _assemble(n, arcs, acap, vcap, role, rot, outer, notes, regime)


def _assemble(n, arcs, acap, vcap, role, rot, outer, notes, regime) -> FlowNetwork:
    arcs = list(arcs)
    acap = list(acap)
    vcap = list(vcap)
    role = list(role)
    rot = [list(r) for r in rot]
    notes = list(notes)
    # A capacitated terminal moves behind a new arc carrying its capacity.
    for v in range(n):
        if role[v] and not is_inf(vcap[v]):
            c = vcap[v]
            w = len(vcap)
            a = len(arcs)
            if role[v] == "source":
                arcs.append((w, v))
                rot[v].append(2 * a + 1)
                rot.append([2 * a])
            else:
                arcs.append((v, w))
                rot[v].append(2 * a)
                rot.append([2 * a + 1])
            acap.append(c)
            vcap.append(INF)
            role.append(role[v])
            vcap[v] = INF
            role[v] = ""
            notes.append(
                f"{role[w]} {v} had capacity {format_number(c)}: "
                f"now fed through arc {a} by new {role[w]} {w}"
            )
    try:
        emb = build_embedding(len(vcap), arcs, rot, outer=outer)
    except (MalformedRotation, EulerViolation) as exc:
        raise ValidationError(str(exc)) from None
    cap = []
    for c in acap:
        cap.extend((c, 0))
    net = FlowNetwork(
        emb,
        tuple(cap),
        tuple(vcap),
        tuple(v for v in range(len(role)) if role[v] == "source"),
        tuple(v for v in range(len(role)) if role[v] == "sink"),
        tuple(notes),
        regime,
    )
    net.validate()
    return net


def write_instance(net: FlowNetwork) -> str:
    g = net.graph
    for e in range(g.m):
        if net.cap[2 * e + 1] != 0:
            raise ValidationError(f"arc {e} has capacity in both directions")
    src, snk = set(net.sources), set(net.sinks)
    out = [f"{MAGIC} {VERSION}", f"regime {net.numeric_regime()}"]
    out += [f"note {note}" for note in net.notes]
    out += [f"vertices {g.n}", f"arcs {g.m}"]
    for v in range(g.n):
        r = " source" if v in src else " sink" if v in snk else ""
        out.append(f"vertex {v} {format_number(net.vertex_cap[v])}{r}")
    for e in range(g.m):
        out.append(f"arc {e} {g.tails[e]} {g.heads[e]} {format_number(net.cap[2 * e])}")
    if g.rotation is not None:
        for v in range(g.n):
            out.append(" ".join([f"rotation {v}"] + [_dart_text(d) for d in g.rotation[v]]))
    if g.outer is not None:
        out.append(f"outer {_dart_text(g.outer)}")
    return "\n".join(out) + "\n"


def write_flow(net: FlowNetwork, f: Flow) -> str:
    g = net.graph
    return "".join(
        f"{g.tails[e]} {g.heads[e]} {format_number(f.values[e])}\n" for e in range(g.m)
    )


def parse_flow(net: FlowNetwork, text: str) -> Flow:
    """Parse a flow dump; lines must follow arc order."""
    g = net.graph
    vals: list[Number] = []
    rows = [_Line(i + 1, raw) for i, raw in enumerate(text.splitlines())]
    rows = [r for r in rows if r.tokens]
    for row in rows:
        row.arity(3)
        e = len(vals)
        if e >= g.m:
            raise row.fail(f"more flow lines than the {g.m} arcs")
        t, h = row.int_at(0), row.int_at(1)
        if (t, h) != (g.tails[e], g.heads[e]):
            raise row.fail(f"line for arc {e} should read '{g.tails[e]} {g.heads[e]} ...'")
        tok = row.tokens[2][0]
        try:
            x = parse_number(tok)
        except (ValueError, ZeroDivisionError):
            raise row.fail(f"expected a number, got {tok!r}", 2) from None
        if is_inf(x):
            raise row.fail("flow values must be finite", 2)
        vals.append(x)
    if len(vals) != g.m:
        raise ParseError(f"expected {g.m} flow lines, got {len(vals)}", len(text.splitlines()) + 1, 1)
    return Flow(tuple(vals))


def with_regime(net: FlowNetwork, regime: str) -> FlowNetwork:
    return replace(net, regime=regime)
