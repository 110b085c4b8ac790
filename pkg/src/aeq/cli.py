"""Command-line front end.

Exit codes: 0 pass, 1 a check failed (or search fell short of its
target), 2 usage or input error.  Vertex indices in human-readable output
are 1-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .certificate import certify
from .constructions import moser_spindle, regular_unit_simplex, two_simplex_union
from .core import Tolerance, is_almost_equidistant, read_pointset
from .errors import AeqError
from .graph import bound_report
from .search import SearchConfig, search

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _one_based(triple):
    return "(" + ",".join(str(i + 1) for i in triple) + ")"


def _write_text(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _tolerance(args) -> Tolerance:
    return Tolerance.from_env(unit_eps=args.tol) if args.tol is not None else Tolerance.from_env()


def cmd_verify(args) -> int:
    ps = read_pointset(args.file)
    tol = _tolerance(args)
    verdict = is_almost_equidistant(ps, tol)
    if verdict.ok:
        print(f"almost-equidistant: yes (n={ps.n}, d={ps.dim}, unit_eps={tol.unit_eps!r})")
        return EXIT_PASS
    print(f"almost-equidistant: no; witness {_one_based(verdict.witness)}")
    return EXIT_FAIL


def cmd_certify(args) -> int:
    ps = read_pointset(args.file)
    report = certify(ps, _tolerance(args))
    if args.json:
        print(json.dumps(report.to_dict(), indent=1, allow_nan=False))
    else:
        print(f"n={report.n} d={report.d}")
        print(f"positive eigenvalues of V: {report.positive_count_V}")
        print(f"eigenvalues of U above 1: {report.above_one_count_U}")
        print(f"eigenvalues of U equal to 1: {report.equal_one_count_U} (need >= {report.n - report.d - 2})")
        print(f"largest eigenvalue of U: {report.lambda_max_U!r}")
        print(f"tr(U) = {report.trace_U!r}  tr(U^3) = {report.trace_U_cubed!r}")
        print(f"rank(W) = {report.rank_W} (bound {report.d + 2})")
        for c in report.checks:
            status = "PASS" if c.passed else "FAIL"
            margin = "n/a" if c.margin is None else repr(c.margin)
            extra = f" witness {c.detail}" if c.detail else ""
            print(f"  [{status}] {c.name}  margin {margin}{extra}")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_construct(args) -> int:
    if args.kind == "moser":
        ps = moser_spindle()
    elif args.kind == "simplex":
        ps = regular_unit_simplex(args.m if args.m is not None else args.d, args.d)
    else:
        ps = two_simplex_union(args.d, args.seed)
    _write_text(ps.to_json(indent=1) + "\n", args.output)
    return EXIT_PASS


def cmd_search(args) -> int:
    cfg = SearchConfig(
        d=args.d,
        target_n=args.target,
        seed=args.seed,
        restarts=args.restarts,
        max_iters=args.max_iter,
        budget_seconds=args.budget_sec,
    )
    result = search(cfg, progress=sys.stderr)
    _write_text(json.dumps(result.to_dict(), indent=1, allow_nan=False) + "\n", args.output)
    print(
        f"n_achieved {result.n_achieved} target {cfg.target_n} verified {result.verified}",
        file=sys.stderr,
    )
    return EXIT_PASS if result.target_met else EXIT_FAIL


def cmd_bounds(args) -> int:
    rep = bound_report(args.d, args.observed)
    if args.json:
        print(json.dumps(rep.to_dict()))
    else:
        print(f"d = {rep.d}")
        print(f"theorem bound 5*d^(13/9) = {rep.theorem_bound!r}")
        print(f"ramsey bound 2.4*(d+2)^2/ln(d+2) = {rep.ramsey_bound!r}")
        if rep.observed_n is not None:
            print(f"observed n = {rep.observed_n}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aeq", description="Almost-equidistant point sets: verify, certify, construct, search.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="check the almost-equidistant property")
    v.add_argument("file")
    v.add_argument("--tol", type=float, default=None, help="unit-distance slack (default 1e-9)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("certify", help="run every spectral and combinatorial check")
    c.add_argument("file")
    c.add_argument("--tol", type=float, default=None, help="unit-distance slack (default 1e-9)")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_certify)

    k = sub.add_parser("construct", help="write a built-in configuration")
    k.add_argument("kind", choices=["moser", "simplex", "two-simplex"])
    k.add_argument("--d", type=int, default=2)
    k.add_argument("--m", type=int, default=None)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("-o", "--output", default=None)
    k.set_defaults(func=cmd_construct)

    s = sub.add_parser("search", help="optimize for a large almost-equidistant set")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--target", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=32)
    s.add_argument("--max-iter", type=int, default=5000)
    s.add_argument("--budget-sec", type=float, default=None)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_search)

    b = sub.add_parser("bounds", help="evaluate the closed-form cardinality bounds")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--observed", type=int, default=None)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR
    except (AeqError, OSError) as exc:
        print(f"aeq: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


run = main


if __name__ == "__main__":
    sys.exit(main())
