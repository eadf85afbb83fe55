"""Command line front end.

Subcommands:

- ``repair``       run one strategy on a repair problem and print a report
- ``permute``      run one strategy under every processing order of the
                   wrong axioms
- ``hasse-check``  run the cross-strategy consistency checks on seeded
                   problems
- ``compare``      judge two ontologies against the same oracle
- ``serve``        start the HTTP repair service

Exit codes (shared by all subcommands):

- 0  success; for ``repair``/``permute`` the result verified as a valid
     repair, for ``hasse-check`` every family held
- 1  input problem: unreadable file, parse error, unknown fixture
- 2  precondition violation (wrong axiom not in the ontology, oracle
     judged a "wrong" axiom true, bad flag combination, ...); argparse
     usage errors also exit 2
- 3  the run completed but the result failed verification (or, for
     ``hasse-check``, at least one family was violated)
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
import tempfile
from typing import Sequence

from .eltext import ParseError, parse_oracle, parse_tbox, parse_axiom_lines
from .engine import (
    STRATEGIES,
    PreconditionError,
    compare_ontologies,
    run_strategy,
)
from .checks import render_check_results, run_all_checks
from .fixtures import FIXTURES, fixture_texts
from .model import Axiom, ShapeError, TBox
from .oracle import DeclarativeOracle, RecordingOracle
from .reasoner import pool_from_name
from .report import render_comparison, render_permutation_reports, render_report

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PRECONDITION = 2
EXIT_INVALID = 3


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_INPUT) from exc


def _emit_warnings(warnings: Sequence[str], label: str) -> None:
    for w in warnings:
        print(f"warning: {label}: {w}", file=sys.stderr)


def _load_problem_texts(args: argparse.Namespace) -> dict[str, str]:
    """Resolve ontology/wrong/oracle texts from --fixture and/or paths."""
    texts: dict[str, str] = {}
    if args.fixture:
        try:
            texts = fixture_texts(args.fixture)
        except KeyError as exc:
            raise CliError(str(exc.args[0]), EXIT_INPUT) from exc
    for slot in ("ontology", "wrong", "oracle"):
        path = getattr(args, slot, None)
        if path:
            texts[slot] = _read_file(path)
    missing = [s for s in ("ontology", "wrong", "oracle") if s not in texts]
    if missing:
        raise CliError(
            "missing input(s): " + ", ".join(f"--{m}" for m in missing)
            + " (or use --fixture)", EXIT_INPUT)
    return texts


def _parse_problem(texts: dict[str, str]) -> tuple[TBox, tuple[Axiom, ...], DeclarativeOracle]:
    try:
        tbox, warnings = parse_tbox(texts["ontology"])
        _emit_warnings(warnings, "ontology")
        wrong, warnings = parse_axiom_lines(texts["wrong"])
        _emit_warnings(warnings, "wrong")
        spec = parse_oracle(texts["oracle"])
        _emit_warnings(spec.warnings, "oracle")
    except ParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_INPUT) from exc
    oracle = DeclarativeOracle(
        spec.true_axioms,
        default=spec.default,
        reflexive=spec.reflexive,
        constructors=spec.constructors,
        transitive=spec.transitive,
    )
    return tbox, wrong, oracle


def _parse_order(text: str, count: int) -> tuple[int, ...] | None:
    if text == "given":
        return None
    try:
        order = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise CliError(f"--order must be 'given' or comma-separated integers, got {text!r}",
                       EXIT_PRECONDITION) from exc
    if sorted(order) != list(range(1, count + 1)):
        raise CliError(
            f"--order must be a permutation of 1..{count}, got {text!r}",
            EXIT_PRECONDITION)
    return order


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    try:
        fd, tmp = tempfile.mkstemp(prefix=".report-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_INPUT) from exc


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ontology", metavar="PATH", help="ontology file (.elt)")
    p.add_argument("--wrong", metavar="PATH", help="wrong-axiom list, one axiom per line")
    p.add_argument("--oracle", metavar="PATH", help="oracle answer table")
    p.add_argument("--fixture", metavar="NAME", choices=sorted(FIXTURES),
                   help="use a built-in problem (paths override individual parts)")


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", default="C1", choices=sorted(STRATEGIES, key=lambda s: int(s[1:])),
                   help="repair strategy (default C1)")
    p.add_argument("--pool", default="atomic", choices=("atomic", "scc"),
                   help="candidate concept pool: atomic names only, or "
                        "simple concepts (atoms, binary conjunctions, "
                        "one-level existentials)")
    p.add_argument("--equiv-exclude", default="off", choices=("on", "off"),
                   help="restrict candidates to one side's surplus, so "
                        "candidate pairs equivalent to the seed are skipped")
    p.add_argument("--prune", default="on", choices=("on", "off"),
                   help="drop added axioms entailed by the other added axioms")
    p.add_argument("--seed", type=int, default=0, help="RNG seed recorded in the report")
    p.add_argument("--report", metavar="PATH", help="write the report here (default stdout)")


def _run_repair(args: argparse.Namespace) -> int:
    tbox, wrong, oracle = _parse_problem(_load_problem_texts(args))
    order = _parse_order(args.order, len(wrong))
    report = run_strategy(
        tbox, wrong, oracle, args.strategy,
        order=order,
        pool=pool_from_name(args.pool),
        equiv_exclude=args.equiv_exclude == "on",
        prune=args.prune == "on",
        seed=args.seed,
    )
    _write_output(render_report(report), args.report)
    return EXIT_OK if report.repair_valid else EXIT_INVALID


def _run_permute(args: argparse.Namespace) -> int:
    tbox, wrong, oracle = _parse_problem(_load_problem_texts(args))
    if len(wrong) > args.bound:
        raise CliError(
            f"{len(wrong)} wrong axioms give {len(wrong)}! orders; "
            f"refusing above --bound {args.bound}", EXIT_PRECONDITION)
    reports = []
    for order in itertools.permutations(range(1, len(wrong) + 1)):
        reports.append(run_strategy(
            tbox, wrong, RecordingOracle(oracle.fresh()), args.strategy,
            order=order,
            pool=pool_from_name(args.pool),
            equiv_exclude=args.equiv_exclude == "on",
            prune=args.prune == "on",
            seed=args.seed,
        ))
    _write_output(render_permutation_reports(reports), args.report)
    return EXIT_OK if all(r.repair_valid for r in reports) else EXIT_INVALID


def _run_hasse_check(args: argparse.Namespace) -> int:
    results = run_all_checks(args.problems, args.seed)
    _write_output(render_check_results(results), args.report)
    return EXIT_OK if all(r.ok for r in results) else EXIT_INVALID


def _run_compare(args: argparse.Namespace) -> int:
    texts = _load_problem_texts(args)
    try:
        left, warnings = parse_tbox(texts["ontology"])
        _emit_warnings(warnings, "ontology")
        right, warnings = parse_tbox(_read_file(args.against))
        _emit_warnings(warnings, "against")
        spec = parse_oracle(texts["oracle"])
        _emit_warnings(spec.warnings, "oracle")
    except ParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_INPUT) from exc
    oracle = DeclarativeOracle(
        spec.true_axioms,
        default=spec.default,
        reflexive=spec.reflexive,
        constructors=spec.constructors,
        transitive=spec.transitive,
    )
    result = compare_ontologies(left, right, oracle)
    _write_output(render_comparison(result), args.report)
    return EXIT_OK


def _run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.sessions_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elrepair",
        description="Repair ontologies with known-wrong axioms by weakening "
                    "and completing them under oracle validation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("repair", help="run one repair strategy")
    _add_problem_args(p)
    _add_run_args(p)
    p.add_argument("--order", default="given",
                   help="processing order for the wrong axioms: 'given' or "
                        "e.g. '2,1,3' (1-based positions in the wrong list)")
    p.set_defaults(func=_run_repair)

    p = sub.add_parser("permute", help="run a strategy under every processing order")
    _add_problem_args(p)
    _add_run_args(p)
    p.add_argument("--bound", type=int, default=6,
                   help="refuse more than this many wrong axioms (default 6)")
    p.set_defaults(func=_run_permute)

    p = sub.add_parser("hasse-check", help="run cross-strategy consistency checks")
    p.add_argument("--problems", type=int, default=25,
                   help="number of seeded random problems (default 25)")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--report", metavar="PATH", help="write results here (default stdout)")
    p.set_defaults(func=_run_hasse_check)

    p = sub.add_parser("compare", help="judge two ontologies against one oracle")
    _add_problem_args(p)
    p.add_argument("--against", metavar="PATH", required=True,
                   help="second ontology file")
    p.add_argument("--report", metavar="PATH", help="write results here (default stdout)")
    p.set_defaults(func=_run_compare)

    p = sub.add_parser("serve", help="start the HTTP repair service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--sessions-dir", default="sessions",
                   help="directory for per-session state (default ./sessions)")
    p.set_defaults(func=_run_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (PreconditionError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    raise SystemExit(main())
