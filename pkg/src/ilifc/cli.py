"""Command-line front end: ``ilifc {bounds,simulate,sweep,verify}``.

Exit codes: 0 success, 1 invalid arguments or parameters, 2 a verification
or audit failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from typing import Optional

from . import bounds, sim, verify
from .errors import IlifcError
from .iilifc import WriteStrategy
from .params import CodeParams

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.3f}"


def _bounds_table(rep: bounds.BoundsReport) -> str:
    rows = [
        ("n, k, q", f"{rep.n}, {rep.k}, {rep.q}"),
        ("delta", _fmt(rep.delta)),
        ("t_ub (ILIFC upper bound)", _fmt(rep.t_ub)),
        ("length condition 1", _fmt(rep.length_ok_1)),
        ("R1", _fmt(rep.R1)),
        ("r1*", _fmt(rep.r1_star)),
        ("U1(r1*)", _fmt(rep.U1)),
        ("t1(r1*)", _fmt(rep.t1)),
        ("t_lb1*", _fmt(rep.t_lb1_star)),
        ("p1", _fmt(rep.p1)),
        ("n > p1", _fmt(rep.beats_ilifc_1)),
        ("length condition 2", _fmt(rep.length_ok_2)),
        ("R2", _fmt(rep.R2)),
        ("r2*", _fmt(rep.r2_star)),
        ("U2(r2*)", _fmt(rep.U2)),
        ("t1(r2*) + t2(r2*)", _fmt(None if rep.t2 is None else bounds.t1(rep.r2_star, rep.n, rep.k, rep.q) + rep.t2)),
        ("t_lb2*", _fmt(rep.t_lb2_star)),
        ("p2", _fmt(rep.p2)),
        ("n > p2", _fmt(rep.beats_ilifc_2)),
        ("max unused (usual)", _fmt(rep.max_unused_usual)),
        ("max unused (unusual)", _fmt(rep.max_unused_unusual)),
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)


@contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_bounds(args) -> int:
    rep = bounds.compute_bounds(args.n, args.k, args.q)
    with _output(args.out) as fh:
        fh.write((rep.to_json() if args.format == "json" else _bounds_table(rep)) + "\n")
    return EXIT_OK


def _strategy(name: str) -> WriteStrategy:
    return WriteStrategy(name)


def cmd_simulate(args) -> int:
    n, k, q, r = args.n, args.k, args.q, args.r
    if (n - r) % k:
        print(f"warning: (n-r) mod k = {(n - r) % k}; {(n - r) % k} data cells stay unused", file=sys.stderr)
    params = CodeParams(n, k, q, r)
    strategy = _strategy(args.strategy)
    workload = sim.Workload.parse(args.workload)
    res = sim.run_average(params, workload, args.epochs, args.seed, strategy)
    payload = res.to_dict(include_epochs=args.per_epoch)
    status = EXIT_OK
    if args.audit:
        audit = sim.bound_audit(params, strategy, args.epochs, (workload,), args.seed)
        payload["audit"] = {
            "guaranteed_writes": audit.guaranteed_writes,
            "used_threshold": audit.used_threshold,
            "max_unused": audit.max_unused,
            "min_writes": audit.min_writes,
            "violations": audit.violations,
            "ok": audit.ok,
        }
        if not audit.ok:
            status = EXIT_FAILED
    with _output(args.out) as fh:
        fh.write(json.dumps(payload, indent=2) + "\n")
    return status


def cmd_sweep(args) -> int:
    results = sim.sweep_r(
        args.n, args.k, args.q,
        workload=sim.Workload.parse(args.workload),
        epochs=args.epochs,
        seed=args.seed,
        strategy=_strategy(args.strategy),
        jobs=args.jobs,
    )
    with _output(args.out) as fh:
        sim.write_csv(results, fh)
    return EXIT_OK


def cmd_verify(args) -> int:
    cert = verify.run_suite(args.scope)
    with _output(args.out) as fh:
        fh.write(cert.to_json() + "\n")
    return EXIT_OK if cert.passed else EXIT_FAILED


def _workload_arg(text: str) -> str:
    try:
        sim.Workload.parse(text)
    except (IlifcError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ilifc", description="ILIFC / I-ILIFC codec bounds, simulation and verification")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def geometry(p, with_r=False):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--q", type=int, required=True)
        if with_r:
            p.add_argument("--r", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default stdout)")

    def experiment(p):
        p.add_argument("--strategy", choices=[s.value for s in WriteStrategy], default="usual")
        p.add_argument("--workload", type=_workload_arg, default="uniform",
                       help="uniform | alternating | distance:<d>")
        p.add_argument("--epochs", type=int, default=10_000)
        p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("bounds", help="print every closed-form bound")
    geometry(p)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="average writes per erasure for one code")
    geometry(p, with_r=True)
    experiment(p)
    p.add_argument("--audit", action="store_true", help="also check the lower-bound guarantees")
    p.add_argument("--per-epoch", action="store_true", help="include per-epoch counts and diagnostics")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="CSV of average writes for every admissible r")
    geometry(p)
    experiment(p)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the brute-force oracle suite")
    p.add_argument("--scope", choices=["quick", "full"], required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    if getattr(args, "epochs", 1) < 1:
        print("error: --epochs must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except IlifcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
