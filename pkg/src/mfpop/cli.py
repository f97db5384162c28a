"""The ``mfpop`` command: validate | explore | solve | crosscheck.

Exit codes: 0 success, 1 domain failure (the message starts with the error
class name), 2 I/O or parse failure.  Reports are JSON with a fixed key
order; exact quantities are strings, float sections carry a ``tol`` field.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from dataclasses import asdict, dataclass
from typing import Optional

from . import __version__
from . import kacmoody as km
from .bethe_oracle import PopulationIndex, match_population, solve_bethe, to_numeric_tuple
from .errors import DegreeCapRequired, MfpopError
from .polyring import format_rational, parse_rational
from .population import DEFAULT_C_SAMPLES, ExploreLimits, check_charge_theorems, explore, to_dot, to_json, verify_population
from .tuplegen import PolyTuple, ProblemData, build_problem

SCHEMA_VERSION = 1
DEFAULT_MAX_DEGREE = 12


class ProblemFileError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


# ---------------------------------------------------------------------------
# problem files


def _int_matrix(value, name):
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise ProblemFileError(f"'{name}' must be a list of integer lists")
    for row in value:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in row):
            raise ProblemFileError(f"'{name}' entries must be integers")
    return value


def parse_problem(doc) -> ProblemData:
    if not isinstance(doc, dict):
        raise ProblemFileError("problem file must hold a JSON object")
    missing = [key for key in ("cartan", "symmetrizer", "points", "weights") if key not in doc]
    if missing:
        raise ProblemFileError(f"missing keys: {', '.join(missing)}")
    unknown = set(doc) - {"cartan", "symmetrizer", "points", "weights", "gram"}
    if unknown:
        raise ProblemFileError(f"unknown keys: {', '.join(sorted(unknown))}")
    cartan = _int_matrix(doc["cartan"], "cartan")
    b = doc["symmetrizer"]
    if not isinstance(b, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in b):
        raise ProblemFileError("'symmetrizer' must be a list of integers")
    if not isinstance(doc["points"], list):
        raise ProblemFileError("'points' must be a list of rational strings")
    weights = _int_matrix(doc["weights"], "weights")
    gram = doc.get("gram")
    try:
        points = [parse_rational(v) for v in doc["points"]]
        if gram is not None:
            if not isinstance(gram, list) or not all(isinstance(row, list) for row in gram):
                raise ProblemFileError("'gram' must be a matrix of rational strings")
            gram = [[parse_rational(v) for v in row] for row in gram]
    except MfpopError:
        raise
    except ValueError as exc:
        raise ProblemFileError(str(exc)) from exc
    cd = km.validate_cartan(cartan, b)
    return build_problem(cd, points, weights, gram)


def load_problem(path: str) -> tuple:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path} is not valid JSON: {exc}") from exc
    return parse_problem(doc), doc


def problem_echo(p: ProblemData, doc: dict) -> dict:
    """Canonical echo; loading it back yields the same problem."""
    out = {
        "cartan": [list(row) for row in p.cartan.A],
        "symmetrizer": list(p.cartan.b),
        "points": [format_rational(v) for v in p.z],
        "weights": [list(m) for m in p.weights],
    }
    if doc.get("gram") is not None:
        out["gram"] = [[format_rational(v) for v in row] for row in p.gram]
    return out


# ---------------------------------------------------------------------------
# option parsing helpers


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",")) if text.strip() else ()
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _rational_list(text: str) -> tuple:
    try:
        return tuple(parse_rational(v.strip()) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _check_k(p: ProblemData, k: tuple) -> tuple:
    if len(k) != p.r or any(v < 0 for v in k):
        raise ProblemFileError(f"degree vector {k} must have {p.r} nonnegative entries")
    return k


@dataclass(frozen=True)
class SolveConfig:
    starts: int = 200
    max_iter: int = 100
    tol: float = 1e-12
    seed: Optional[int] = None

    def resolved(self) -> "SolveConfig":
        if self.seed is not None:
            return self
        return SolveConfig(self.starts, self.max_iter, self.tol, secrets.randbits(32))


def _limits(p: ProblemData, args) -> ExploreLimits:
    max_degree = args.max_degree
    if max_degree is None:
        if not p.cartan.is_finite_type():
            raise DegreeCapRequired("degree cap required for affine type (pass --max-degree)")
        max_degree = DEFAULT_MAX_DEGREE
    return ExploreLimits(max_depth=args.depth, c_samples=args.c_samples, max_component_degree=max_degree)


# ---------------------------------------------------------------------------
# report sections


def _header(command: str, seed) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "mfpop", "version": __version__},
        "command": command,
        "seed": seed,
    }


def population_section(g, lim: ExploreLimits) -> dict:
    report = verify_population(g)
    charges = check_charge_theorems(g)
    summary = {
        "limits": {
            "depth": lim.max_depth,
            "c_samples": [format_rational(c) for c in lim.c_samples],
            "max_degree": lim.max_component_degree,
        },
        "node_count": len(g.nodes),
        "edge_count": len(g.edges),
        "degree_vectors": [list(k) for k in sorted(g.degree_vectors())],
        "charge": report.charge,
        "mu": None if report.mu is None else [format_rational(v) for v in report.mu],
        "minimal": [[y.to_strings() for y in t.y] for t in charges.minimal],
        "graph": to_json(g),
    }
    checks = [
        {"name": c.name, "passed": c.passed, "detail": c.detail, "witnesses": [str(w) for w in c.witnesses]}
        for c in report.checks
    ]
    verification = {
        "passed": report.passed and charges.passed,
        "checks": checks,
        "charge_theorems": {
            "status": charges.status,
            "passed": charges.passed,
            "violations": list(charges.violations),
        },
    }
    return summary, verification


def solver_section(p: ProblemData, k: tuple, cfg: SolveConfig):
    result = solve_bethe(p, k, starts=cfg.starts, max_iter=cfg.max_iter, tol=cfg.tol, seed=cfg.seed)
    section = {
        "tol": cfg.tol,
        "k": list(k),
        "charge": km.charge_form(p, k),
        "starts": cfg.starts,
        "max_iter": cfg.max_iter,
        "stats": asdict(result.stats),
        "points": [pt.to_json() for pt in result],
    }
    return section, result


# ---------------------------------------------------------------------------
# commands


def _write(doc: dict, path: Optional[str]):
    text = json.dumps(doc, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ProblemFileError(f"cannot write {path}: {exc.strerror or exc}") from exc


def cmd_validate(args) -> int:
    p, _ = load_problem(args.file)
    kind = "finite" if p.cartan.is_finite_type() else ("degenerate" if p.cartan.d else "indefinite")
    print(f"ok: rank {p.r}, {p.n} points, tau {list(p.tau)}, {kind} type")
    return 0


def cmd_explore(args) -> int:
    p, doc = load_problem(args.file)
    lim = _limits(p, args)
    g = explore(p, PolyTuple.empty(p.r), lim)
    summary, verification = population_section(g, lim)
    out = _header("explore", None)
    out["problem"] = problem_echo(p, doc)
    out["population"] = summary
    out["verification"] = verification
    _write(out, args.out)
    if args.dot:
        try:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(to_dot(g))
        except OSError as exc:
            raise ProblemFileError(f"cannot write {args.dot}: {exc.strerror or exc}") from exc
    if not verification["passed"]:
        failed = [c["name"] for c in verification["checks"] if not c["passed"]]
        print(f"VerificationFailed: {', '.join(failed) or 'charge theorems'}", file=sys.stderr)
        return 1
    return 0


def cmd_solve(args) -> int:
    p, doc = load_problem(args.file)
    k = _check_k(p, args.k)
    cfg = SolveConfig(args.starts, args.max_iter, args.tol, args.seed).resolved()
    section, _ = solver_section(p, k, cfg)
    out = _header("solve", cfg.seed)
    out["problem"] = problem_echo(p, doc)
    out["solver"] = section
    _write(out, args.out)
    return 0


def orbit_degrees(p: ProblemData, max_degree: int) -> list:
    return sorted(km.degree_orbit(p, (0,) * p.r, max_degree))


def cmd_crosscheck(args) -> int:
    p, doc = load_problem(args.file)
    ks = [_check_k(p, k) for k in (args.k or [])]
    lim = _limits(p, args)
    if args.orbit:
        ks += [k for k in orbit_degrees(p, lim.max_component_degree) if k not in ks]
    cfg = SolveConfig(args.starts, args.max_iter, args.tol, args.seed).resolved()
    out = _header("crosscheck", cfg.seed)
    out["problem"] = problem_echo(p, doc)
    g = explore(p, PolyTuple.empty(p.r), lim)
    summary, verification = population_section(g, lim)
    summary.pop("graph")
    out["population"] = summary
    out["verification"] = verification
    if ks:
        index = PopulationIndex(g)
        entries = []
        for k in ks:
            section, result = solver_section(p, k, cfg)
            matches = [match_population(g, to_numeric_tuple(pt), args.match_tol, index) for pt in result]
            for pt_json, m in zip(section["points"], matches):
                pt_json["match"] = m.to_json()
            section["matched"] = sum(m.matched for m in matches)
            section["unmatched"] = len(matches) - section["matched"]
            entries.append(section)
        out["crosscheck"] = {
            "tol": args.match_tol,
            "entries": entries,
            "matched": sum(e["matched"] for e in entries),
            "unmatched": sum(e["unmatched"] for e in entries),
        }
    _write(out, args.out)
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfpop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mfpop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a problem file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    def explore_flags(sp):
        sp.add_argument("--depth", type=int, default=3)
        sp.add_argument("--c-samples", type=_rational_list, default=DEFAULT_C_SAMPLES)
        sp.add_argument("--max-degree", type=int, default=None)

    def solve_flags(sp):
        sp.add_argument("--starts", type=int, default=200)
        sp.add_argument("--max-iter", type=int, default=100)
        sp.add_argument("--tol", type=float, default=1e-12)
        sp.add_argument("--seed", type=int, default=None)

    e = sub.add_parser("explore", help="explore the population of the constant tuple")
    e.add_argument("file")
    explore_flags(e)
    e.add_argument("--out")
    e.add_argument("--dot")
    e.set_defaults(func=cmd_explore)

    s = sub.add_parser("solve", help="numeric critical points of one degree vector")
    s.add_argument("file")
    s.add_argument("--k", type=_int_list, required=True)
    solve_flags(s)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("crosscheck", help="match numeric critical points against the population")
    c.add_argument("file")
    c.add_argument("--k", type=_int_list, action="append")
    c.add_argument("--orbit", action="store_true", help="also solve every degree vector in the orbit of 0 up to the degree cap")
    c.add_argument("--match-tol", type=float, default=1e-8)
    explore_flags(c)
    solve_flags(c)
    c.add_argument("--out")
    c.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MfpopError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
