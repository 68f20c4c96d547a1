"""Command-line interface.

Subcommands: triplets, ricci, solve, classify, table, verify-paper.
Results go to stdout (JSON or text), logs to stderr.  Exit codes:
0 success, 1 domain error, 2 usage error, 3 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .einstein import (
    Budget,
    build_system,
    classify,
    count_table,
    dedup_isometry,
    scale_to_unit,
    solve_exact,
    solve_numeric,
    v_float,
)
from .exact import MonomialOrder, StructuralError, rat
from .groebner import BasisCache, BudgetExceededError
from .liealg import Decomposition, triplets_closed_form
from .ricci import ricci_closed_form, ricci_generic
from .verify import run_verification

__all__ = ["Config", "main", "run_command"]

DEFAULT_CACHE = ".einso_cache"


@dataclass
class Config:
    groebner_max_steps: int = 1_000_000
    groebner_max_terms: int = 2_500_000
    refinement_tolerance: Fraction = Fraction(1, 10**9)
    numeric_starts: int = 4000
    cache_dir: Path = None
    output_format: str = "text"
    workers: int = 1
    seed: int = 20250201
    table_n_max: int = 9

    def __post_init__(self):
        if self.groebner_max_steps <= 0 or self.groebner_max_terms <= 0:
            raise StructuralError("budget limits must be positive")
        if self.numeric_starts <= 0:
            raise StructuralError("numeric_starts must be positive")
        if self.cache_dir is None:
            env = os.environ.get("EINSTEIN_SO_CACHE")
            self.cache_dir = Path(env) if env else Path(DEFAULT_CACHE)

    @property
    def budget(self) -> Budget:
        return Budget(self.groebner_max_steps, self.groebner_max_terms)

    @property
    def cache(self) -> BasisCache:
        return BasisCache(self.cache_dir)

    @staticmethod
    def from_file(path) -> "Config":
        """key=value lines; unknown keys rejected."""
        cfg = {}
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise StructuralError(f"bad config line: {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key in ("groebner_max_steps", "groebner_max_terms", "numeric_starts",
                       "workers", "seed", "table_n_max"):
                cfg[key] = int(value)
            elif key == "refinement_tolerance":
                cfg[key] = rat(value)
            elif key == "cache_dir":
                cfg[key] = Path(value)
            elif key == "output_format":
                cfg[key] = value
            else:
                raise StructuralError(f"unknown config key {key!r}")
        return Config(**cfg)


class UsageError(Exception):
    pass


def _decomposition(args) -> Decomposition:
    try:
        return Decomposition(args.k1, args.k2, args.k3)
    except StructuralError as exc:
        raise UsageError(str(exc)) from None


def _emit(payload, args, as_json: bool):
    text = json.dumps(payload, indent=2) if as_json else payload
    target = getattr(args, "json", None)
    if isinstance(target, str) and target not in ("-", ""):
        Path(target).write_text(text if isinstance(text, str) else str(text))
        print(f"wrote {target}", file=sys.stderr)
    else:
        print(text)


def _cmd_triplets(args, config: Config) -> int:
    d = _decomposition(args)
    table = triplets_closed_form(d)
    print(json.dumps(table.as_json_dict(), indent=2))
    return 0


def _cmd_ricci(args, config: Config) -> int:
    d = _decomposition(args)
    sys_r = ricci_closed_form(d) if args.closed_form else ricci_generic(d)
    assignments = _parse_assignments(args.set or [])
    if assignments:
        point = {k: rat(v) for k, v in assignments.items()}
        missing = [v for v in sys_r.ring.vars if v not in point]
        if missing:
            raise StructuralError(f"missing metric values for {missing}")
        vals = sys_r.evaluate_at(point)
        payload = {
            "k": list(d.k),
            "metric": {k: str(v) for k, v in point.items()},
            "components": {
                lab: {"value": str(v), "approx": float(v)} for lab, v in vals.items()
            },
        }
        print(json.dumps(payload, indent=2))
    else:
        order = MonomialOrder.lex(*sys_r.ring.vars)
        for lab, (num, den) in sys_r.components.items():
            print(f"r_{lab[1:]} = ({num.text(order)}) / ({den.text(order)})")
    return 0


def _parse_assignments(pairs) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise StructuralError(f"expected var=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _solve_records(args, config: Config):
    d = _decomposition(args)
    sys_e = build_system(d)
    spec = _parse_assignments(args.specialize or []) or None
    extra = list(args.nonzero or [])
    records = []
    status = "exact"
    if args.method in ("exact", "both"):
        records = solve_exact(sys_e, spec, extra_nonzero=extra,
                              budget=config.budget, cache=config.cache)
    if args.method == "numeric" or (args.method == "both" and not records):
        records = solve_numeric(sys_e, starts=config.numeric_starts,
                                seed=config.seed, specialization=spec)
        status = "numeric-only"
    elif args.method == "both":
        numeric = solve_numeric(sys_e, starts=config.numeric_starts,
                                seed=config.seed, specialization=spec)
        print(f"numeric pass found {len(numeric)} clusters "
              f"(exact found {len(records)})", file=sys.stderr)
    scaled = [scale_to_unit(r, sys_e.ricci) for r in records]
    classified = [replace(r, classification=classify(r)) for r in scaled]
    return dedup_isometry(classified, d), status


def _cmd_solve(args, config: Config) -> int:
    records, status = _solve_records(args, config)
    tol = Fraction(args.tol)
    payload = [r.as_json_dict(tol=tol) for r in records]
    if getattr(args, "json", None) is not None:
        _emit(payload, args, as_json=True)
    else:
        for r in records:
            cls = r.classification
            print(f"class {r.isometry_class}: {cls.kind}"
                  + (f" (case {cls.case}, {cls.subgroup})" if cls.case else ""))
            for v, x in sorted(r.scaled_coordinates.items()):
                print(f"    {v} = {v_float(x):.9g}")
    return 0


def _cmd_classify(args, config: Config) -> int:
    d = _decomposition(args)
    assignments = _parse_assignments(args.set or [])
    from .ricci import metric_vars
    from .einstein import SolutionRecord

    point = {k: rat(v) for k, v in assignments.items()}
    missing = [v for v in metric_vars(d) if v not in point]
    if missing:
        raise StructuralError(f"missing coordinates {missing}")
    rec = SolutionRecord(d, point, status="exact")
    cls = classify(rec, d)
    print(json.dumps({"kind": cls.kind, "case": cls.case, "subgroup": cls.subgroup}, indent=2))
    return 0


def _cmd_table(args, config: Config) -> int:
    cells = count_table(args.n_min, args.n_max, budget=config.budget,
                        cache=config.cache, starts=config.numeric_starts,
                        seed=config.seed)
    payload = [
        {
            "k": list(c.decomposition.k),
            "non_naturally_reductive": c.non_naturally_reductive,
            "naturally_reductive": c.naturally_reductive,
            "undecided": c.undecided,
            "status": c.status,
            "seconds": round(c.seconds, 2),
        }
        for c in cells
    ]
    if getattr(args, "json", None) is not None:
        _emit(payload, args, as_json=True)
    else:
        print(f"{'k':>12}  {'non-NR':>7}  {'NR':>4}  status")
        for c in payload:
            print(f"{str(tuple(c['k'])):>12}  {c['non_naturally_reductive']:>7}"
                  f"  {c['naturally_reductive']:>4}  {c['status']}"
                  f" ({c['seconds']}s)")
    return 0


def _cmd_verify_paper(args, config: Config) -> int:
    only = set(args.only) if args.only else None

    def progress(result):
        mark = {"pass": "PASS", "fail": "FAIL"}.get(result.status, result.status)
        print(f"[{mark}] {result.name} ({result.runtime:.1f}s)", file=sys.stderr)

    report = run_verification(config, only=only, progress=progress)
    payload = report.as_json_dict()
    if getattr(args, "json", None) is not None:
        _emit(payload, args, as_json=True)
    else:
        for c in report.checks:
            print(f"{c.status.upper():>16}  {c.name}  [{c.runtime:.1f}s]")
            print(f"{'':>16}  expected: {c.expected}")
            print(f"{'':>16}  actual:   {c.actual}")
    return 0 if report.all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="einso",
        description="Exact classification of invariant Einstein metrics on "
                    "special orthogonal groups from three-block decompositions.",
    )
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--cache-dir", help="basis cache directory")
    parser.add_argument("--max-steps", type=int, help="reduction step budget")
    parser.add_argument("--seed", type=int, help="seed for the numeric solver")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_k(p):
        p.add_argument("--k1", type=int, required=True)
        p.add_argument("--k2", type=int, required=True)
        p.add_argument("--k3", type=int, required=True)

    p = sub.add_parser("triplets", help="structure-constant table as JSON")
    add_k(p)

    p = sub.add_parser("ricci", help="symbolic or evaluated Ricci components")
    add_k(p)
    p.add_argument("--set", action="append", metavar="var=value",
                   help="metric value; repeat per variable")
    p.add_argument("--closed-form", action="store_true",
                   help="use the transcribed closed forms instead of the generic path")

    p = sub.add_parser("solve", help="find the Einstein metrics of a decomposition")
    add_k(p)
    p.add_argument("--method", choices=("exact", "numeric", "both"), default="exact")
    p.add_argument("--specialize", action="append", metavar="var=expr")
    p.add_argument("--nonzero", action="append", metavar="expr",
                   help="polynomial forced nonzero during saturation")
    p.add_argument("--tol", default="1e-9", help="refinement tolerance")
    p.add_argument("--json", nargs="?", const="-", metavar="out.json")

    p = sub.add_parser("classify", help="naturally-reductive test for given coordinates")
    add_k(p)
    p.add_argument("--set", action="append", metavar="var=value", required=True)

    p = sub.add_parser("table", help="counts of Einstein metrics per decomposition")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--json", nargs="?", const="-", metavar="out.json")

    p = sub.add_parser("verify-paper", help="recompute and compare the published values")
    p.add_argument("--only", action="append", metavar="CHECK",
                   help="run a subset of checks by name")
    p.add_argument("--table-n-max", type=int, default=9)
    p.add_argument("--json", nargs="?", const="-", metavar="out.json")

    return parser


_COMMANDS = {
    "triplets": _cmd_triplets,
    "ricci": _cmd_ricci,
    "solve": _cmd_solve,
    "classify": _cmd_classify,
    "table": _cmd_table,
    "verify-paper": _cmd_verify_paper,
}


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.config:
        config = Config.from_file(args.config)
    else:
        config = Config()
    if args.cache_dir:
        config.cache_dir = Path(args.cache_dir)
    if args.max_steps:
        config.groebner_max_steps = args.max_steps
    if args.seed is not None:
        config.seed = args.seed
    if getattr(args, "table_n_max", None):
        config.table_n_max = args.table_n_max
    try:
        return _COMMANDS[args.command](args, config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except (StructuralError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
