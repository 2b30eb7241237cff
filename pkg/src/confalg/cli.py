"""Command-line interface for checking, constructing, and cohomology runs.

``confalg check FILE`` executes a source file's declarations and check
statements; ``confalg construct FILE`` additionally prints the source form of
every constructed structure; ``confalg cohomology {d2-check,mc-check,bracket}``
runs differential and bracket computations against the objects a file
declares.  Every command accepts ``--json`` for a machine-readable report and
exits 0 when all checks hold, 1 when some check fails, and 2 on parse or
runtime errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .cohomology import (
    Cochain,
    g_bracket,
    maurer_cartan_check,
)
from .confcore import ConfBimodule
from .dsl import (
    Environment,
    Record,
    Report,
    d_squared_suite,
    parse_file,
    render_elem,
    run,
)
from .errors import ConfalgError, UnresolvedName

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confalg",
        description="exact checks and constructions for conformal algebras",
    )
    parser.add_argument("--version", action="version", version=f"confalg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, seeded: bool = False) -> None:
        p.add_argument("file", help="source file to execute")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument(
            "--witness-cap",
            type=int,
            default=16,
            metavar="K",
            help="cap on reported witnesses per check (default 16)",
        )
        if seeded:
            p.add_argument("--seed", type=int, default=0, metavar="N", help="random seed")
            p.add_argument(
                "--max-degree",
                type=int,
                default=2,
                metavar="K",
                help="per-variable degree cap for generated cochains (default 2)",
            )

    check = sub.add_parser("check", help="run a file's check statements")
    common(check, seeded=True)

    construct = sub.add_parser(
        "construct", help="run a file and print constructed structures as source"
    )
    common(construct)

    cohomology = sub.add_parser("cohomology", help="differential and bracket runs")
    cosub = cohomology.add_subparsers(dest="subcommand", required=True)

    d2 = cosub.add_parser("d2-check", help="verify d∘d = 0 on random cochains")
    common(d2, seeded=True)
    d2.add_argument("--algebra", metavar="NAME", help="algebra to use (default: first declared)")
    d2.add_argument("--bimodule", metavar="NAME", help="bimodule to use (default: adjoint)")
    d2.add_argument("--count", type=int, default=10, metavar="N", help="number of samples")

    mc = cosub.add_parser("mc-check", help="Maurer-Cartan characterization of a map")
    common(mc)
    mc.add_argument("--map", required=True, metavar="NAME", help="map to test")
    mc.add_argument("--algebra", metavar="NAME", help="algebra (default: first declared)")
    mc.add_argument("--bimodule", metavar="NAME", help="bimodule (default: adjoint)")

    bracket = cosub.add_parser("bracket", help="graded bracket of two cochains")
    common(bracket)
    bracket.add_argument("--left", required=True, metavar="NAME", help="map or cocycle")
    bracket.add_argument("--right", required=True, metavar="NAME", help="map or cocycle")

    return parser


def _print_report(report: Report, *, json_mode: bool, show_emitted: bool) -> None:
    if json_mode:
        print(report.to_json_text())
        return
    for rec in report.records:
        print(f"[{rec.status}] {rec.identity} ({rec.elapsed_ms:.1f} ms)")
        if rec.detail:
            print(f"    {rec.detail}")
        for witness in rec.witnesses:
            names = ", ".join(witness["names"])
            print(f"    witness ({names}): {witness['residual']}")
        if show_emitted and rec.emitted:
            print(rec.emitted)


def _load(args) -> Tuple[Report, Environment, str]:
    echo = " ".join(
        part for part in (args.command, getattr(args, "subcommand", None), args.file) if part
    )
    sf = parse_file(args.file)
    report, env = run(
        sf,
        command=echo,
        seed=getattr(args, "seed", None),
        witness_cap=args.witness_cap,
        version=__version__,
    )
    return report, env, echo


def _pick_algebra(env: Environment, name: Optional[str]):
    if name is not None:
        if name not in env.algebras:
            raise UnresolvedName(f"unknown algebra {name!r}")
        return name, env.algebras[name]
    if not env.algebras:
        raise UnresolvedName("the file declares no algebra")
    first = next(iter(env.algebras))
    return first, env.algebras[first]


def _pick_bimodule(env: Environment, name: Optional[str], algebra) -> Tuple[str, ConfBimodule]:
    if name is not None:
        if name not in env.bimodules:
            raise UnresolvedName(f"unknown bimodule {name!r}")
        return name, env.bimodules[name]
    return "adjoint", ConfBimodule.adjoint(algebra)


def _as_self_cochain(env: Environment, name: str) -> Cochain:
    if name in env.maps:
        return Cochain.from_module_map(env.maps[name])
    if name in env.cocycles:
        return env.cocycles[name][0]
    raise UnresolvedName(f"unknown map or cocycle {name!r}")


def _cmd_d2_check(args) -> Report:
    report, env, echo = _load(args)
    records: List[Record] = list(report.records)
    alg_name, alg = _pick_algebra(env, args.algebra)
    bim_name, bim = _pick_bimodule(env, args.bimodule, alg)
    started = time.perf_counter()
    ok, witnesses = d_squared_suite(
        alg, bim, count=args.count, seed=args.seed, max_degree=args.max_degree
    )
    elapsed = (time.perf_counter() - started) * 1000.0
    records.append(
        Record(
            f"d2-check {alg_name} with {bim_name}",
            "holds" if ok else "fails",
            witnesses[: args.witness_cap],
            elapsed,
            f"{args.count} random cochains of arities 1 and 2",
        )
    )
    return Report(echo, __version__, args.seed, tuple(records))


def _cmd_mc_check(args) -> Report:
    report, env, echo = _load(args)
    records: List[Record] = list(report.records)
    if args.map not in env.maps:
        raise UnresolvedName(f"unknown map {args.map!r}")
    alg_name, alg = _pick_algebra(env, args.algebra)
    bim_name, bim = _pick_bimodule(env, args.bimodule, alg)
    started = time.perf_counter()
    verdict = maurer_cartan_check(env.maps[args.map], alg, bim)
    elapsed = (time.perf_counter() - started) * 1000.0
    witnesses = (
        ()
        if verdict.consistent
        else ({"names": ["maurer-cartan"], "residual": verdict.summary()},)
    )
    records.append(
        Record(
            f"mc-check {args.map} on {alg_name} with {bim_name}",
            "holds" if verdict.consistent else "fails",
            witnesses,
            elapsed,
            verdict.summary(),
        )
    )
    return Report(echo, __version__, None, tuple(records))


def _cmd_bracket(args) -> Report:
    report, env, echo = _load(args)
    records: List[Record] = list(report.records)
    left = _as_self_cochain(env, args.left)
    right = _as_self_cochain(env, args.right)
    started = time.perf_counter()
    result = g_bracket(left, right)
    payload = result.payload
    lines = [f"degree {result.degree}"]
    module = payload.input_module
    for idx in sorted(payload.table.entries):
        names = ", ".join(module.basis[i] for i in idx)
        lines.append(f"[{args.left}, {args.right}]({names}) = {render_elem(payload.table.entries[idx])}")
    if payload.is_zero():
        lines.append(f"[{args.left}, {args.right}] = 0")
    elapsed = (time.perf_counter() - started) * 1000.0
    records.append(
        Record(
            f"bracket {args.left} {args.right}",
            "holds",
            (),
            elapsed,
            "\n".join(lines),
        )
    )
    return Report(echo, __version__, None, tuple(records))


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            report, _, _ = _load(args)
        elif args.command == "construct":
            report, _, _ = _load(args)
        elif args.subcommand == "d2-check":
            report = _cmd_d2_check(args)
        elif args.subcommand == "mc-check":
            report = _cmd_mc_check(args)
        else:
            report = _cmd_bracket(args)
    except (ConfalgError, OSError) as exc:
        echo = " ".join(
            part
            for part in (args.command, getattr(args, "subcommand", None), args.file)
            if part
        )
        report = Report(
            echo,
            __version__,
            getattr(args, "seed", None),
            (Record("parse", "error", (), 0.0, str(exc)),),
        )
        _print_report(report, json_mode=args.json, show_emitted=False)
        return 2
    _print_report(report, json_mode=args.json, show_emitted=args.command == "construct")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
