"""Command line interface.

Exit status: 0 on success, 1 when a flow is wrong or solvers disagree,
2 for unreadable or unsupported input.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable

from .bounded import solve_bounded
from .errors import ParamError, ParseError, PlanarFlowError, ValidationError, WrongTerminalCount
from .flow import Flow, FlowNetwork, flow_value, is_feasible
from .generate import GenParams, generate
from .instance import parse_flow, parse_instance, write_flow, write_instance
from .k3 import solve_k3
from .oracle import oracle_maxflow
from .scaling import solve_scaling
from .scalars import format_number, is_inf, is_integral

OK, MISMATCH, BAD_INPUT = 0, 1, 2

AUTO_HELP = (
    "auto picks k3 when there are exactly three terminals, bounded when "
    "every finite capacity is at most 16 or some capacity is fractional, "
    "and scaling otherwise"
)
SMALL_U = 16


class InputError(Exception):
    pass


def _integral(G: FlowNetwork) -> bool:
    return all(is_inf(c) or is_integral(c) for c in G.cap + G.vertex_cap)


def _max_finite(G: FlowNetwork) -> int:
    return max((c for c in G.cap + G.vertex_cap if not is_inf(c)), default=0)


def solvers_for(G: FlowNetwork) -> dict[str, Callable[[FlowNetwork], Flow]]:
    out: dict[str, Callable[[FlowNetwork], Flow]] = {"bounded": solve_bounded}
    if _integral(G):
        out["scaling"] = solve_scaling
    if G.k == 3:
        out["k3"] = solve_k3
    return out


def pick(G: FlowNetwork, algo: str) -> Callable[[FlowNetwork], Flow]:
    if algo == "auto":
        if G.k == 3:
            algo = "k3"
        elif not _integral(G) or _max_finite(G) <= SMALL_U:
            algo = "bounded"
        else:
            algo = "scaling"
    available = solvers_for(G)
    if algo not in available:
        why = f"k = {G.k}" if algo == "k3" else "fractional capacities"
        raise InputError(f"solver {algo!r} does not apply to this instance ({why})")
    return available[algo]


def _load(path: str) -> FlowNetwork:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_instance(text)
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from None
    except ValidationError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_solve(args) -> int:
    G = _load(args.file)
    f = pick(G, args.algo)(G)
    print(format_number(flow_value(G, f)))
    if args.dump:
        Path(args.dump).write_text(write_flow(G, f))
    elif args.show_flow:
        sys.stdout.write(write_flow(G, f))
    return OK


def cmd_oracle(args) -> int:
    G = _load(args.file)
    value, f = oracle_maxflow(G)
    print(format_number(value))
    if args.show_flow:
        sys.stdout.write(write_flow(G, f))
    return OK


def cmd_check(args) -> int:
    G = _load(args.file)
    try:
        f = parse_flow(G, Path(args.flow).read_text())
    except OSError as exc:
        raise InputError(f"{args.flow}: {exc.strerror}") from None
    except ParseError as exc:
        raise InputError(f"{args.flow}:{exc}") from None
    report = is_feasible(G, f)
    if not report.ok:
        for line in report.lines():
            print(line)
        return MISMATCH
    print(f"feasible, value {format_number(flow_value(G, f))}")
    return OK


def cmd_gen(args) -> int:
    try:
        params = GenParams(
            n=args.n, k=args.k, U=args.U, regime=args.regime, density=args.density,
            sources=args.sources, inner_terminals=args.inner_terminals,
            layout=args.layout, face_sources=args.face_sources,
        )
        G = generate(args.seed, params)
    except ParamError as exc:
        raise InputError(str(exc)) from None
    text = write_instance(G)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def compare_one(path: str) -> tuple[str, int, list[str]]:
    """Run every applicable solver and the oracle on one file."""
    try:
        G = _load(path)
    except InputError as exc:
        return path, BAD_INPUT, [str(exc)]
    expected, _ = oracle_maxflow(G)
    lines = [f"{path}: oracle {format_number(expected)}"]
    status = OK
    for name, solve in solvers_for(G).items():
        try:
            f = solve(G)
        except PlanarFlowError as exc:
            lines.append(f"{path}: {name} failed: {type(exc).__name__}: {exc}")
            status = MISMATCH
            continue
        report = is_feasible(G, f)
        value = flow_value(G, f) if not report.conservation else None
        good = report.ok and value == expected
        shown = "?" if value is None else format_number(value)
        lines.append(f"{path}: {name} {shown} {'ok' if good else 'MISMATCH'}")
        lines += [f"{path}:   {line}" for line in report.lines()]
        if not good:
            status = MISMATCH
    return path, status, lines


def cmd_compare(args) -> int:
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(compare_one, args.files))
    else:
        results = [compare_one(p) for p in args.files]
    status = OK
    for _, code, lines in results:
        for line in lines:
            print(line)
        status = max(status, code)
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planarflow", description="Maximum flow in planar networks with vertex capacities.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="print the maximum flow value", epilog=AUTO_HELP)
    s.add_argument("file")
    s.add_argument("--algo", choices=("bounded", "scaling", "k3", "auto"), default="auto")
    s.add_argument("--dump", metavar="PATH", help="write the flow to PATH")
    s.add_argument("--show-flow", action="store_true", help="print the flow after the value")
    s.set_defaults(run=cmd_solve)

    o = sub.add_parser("oracle", help="maximum flow by vertex splitting")
    o.add_argument("file")
    o.add_argument("--show-flow", action="store_true")
    o.set_defaults(run=cmd_oracle)

    c = sub.add_parser("check", help="validate a flow dump against an instance")
    c.add_argument("file")
    c.add_argument("flow")
    c.set_defaults(run=cmd_check)

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--n", type=int, default=16)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--U", type=int, default=8)
    g.add_argument("--regime", choices=("integer", "rational"), default="integer")
    g.add_argument("--density", type=float, default=0.85)
    g.add_argument("--sources", type=int)
    g.add_argument("--layout", choices=("grid", "web"), default="grid")
    g.add_argument("--inner-terminals", action="store_true", help="allow terminals off the outer face")
    g.add_argument("--face-sources", action="store_true", help="put sources inside faces")
    g.add_argument("--out", metavar="PATH")
    g.set_defaults(run=cmd_gen)

    m = sub.add_parser("compare", help="run all applicable solvers against the oracle")
    m.add_argument("files", nargs="+")
    m.add_argument("--jobs", type=int, default=1)
    m.set_defaults(run=cmd_compare)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (InputError, WrongTerminalCount) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
