"""Command-line interface ``ebspace``.

Exit codes: 0 EB, 1 NotEB, 2 Undecided for ``certify``; 0 on success for
the other commands; 3 on any usage, file or domain error.  Every randomized
command takes ``--seed`` (default :data:`DEFAULT_SEED`).
"""

from __future__ import annotations

import argparse
import enum
import sys
from typing import IO, Sequence

import numpy as np

from . import construct as cons
from .certify import EBStatus, EBVerdict, Family3Params, certify
from .eof import additivity_check, eof, scan_nonadditivity, section_iv_state
from .errors import EBSpaceError
from .io import canonical_json, emit_csv, parse_document, parse_state, serialize_space, serialize_state
from .states import DensityOperator, ProbeState
from .tavis_cummings import TCParams, tc_curve, tc_rho_AC

DEFAULT_SEED = 0
EXIT_CODES = {EBStatus.EB: 0, EBStatus.NOT_EB: 1, EBStatus.UNDECIDED: 2}
EXIT_ERROR = 3

BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Family3Params):
        return {"d": obj.d, "f": obj.f, "theta": obj.theta, "g": obj.g, "lhs": obj.lhs}
    if isinstance(obj, ProbeState):
        return {"ancilla_dim": obj.ancilla_dim, "coeffs": _jsonable(obj.coeffs)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [_jsonable(v) for v in obj] if obj.ndim > 1 else [[float(z.real), float(z.imag)] for z in obj]
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def verdict_report(v: EBVerdict) -> dict:
    """Structured summary of a verdict."""
    return _jsonable({
        "status": v.status,
        "route": v.route,
        "family": v.family,
        "params": v.params,
        "min_pt_eigenvalue": v.min_pt_eigenvalue,
        "evidence": v.evidence,
        "counterexample": v.counterexample,
    })


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _kv(items: Sequence[str]) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise _UsageError(f"parameter {item!r} is not key=value")
        out[key] = val
    return out


def _floats(text: str) -> list[complex]:
    return [complex(t) for t in text.split(",")]


def _build(family: str, params: dict):
    """Space or state for ``construct``; returns (object, metadata)."""
    fx = cons.fixtures
    if family == "fixture-U":
        return fx().spaceU, {}
    if family == "fixture-V":
        return fx().spaceV, {}
    if family == "family3":
        p = Family3Params(*(float(params.get(k, 0.0)) for k in ("d", "f", "theta", "g")))
        return cons.family3_space(p, int(params.get("m", 2))), {"params": [p.d, p.f, p.theta, p.g]}
    if family == "saturating":
        n = int(params["n"])
        rows = [np.array(_floats(r)) for r in params["a"].split(";")]
        return cons.saturating_space(n, rows), {"n": n}
    if family == "3dim-3N":
        x = _floats(params.get("x", "2,2,2"))
        p = cons.DirectSumFamilyParams(int(params.get("m", 3)), int(params.get("N", 2)), tuple(x))
        return cons.family_3dim_3N(p), {"x": [[z.real, z.imag] for z in x]}
    if family == "2xn":
        p = cons.Family2xnParams(*(tuple(_floats(params[k])) for k in "abcd"))
        return cons.family_2xn_space(p), {}
    if family == "i3i2bell":
        return section_iv_state(), None
    if family == "tc-rho-ac":
        p = TCParams(float(params["alpha"]), float(params["beta"]), float(params.get("coupling", 1.0)),
                     float(params.get("t", 0.0)))
        return tc_rho_AC(p), None
    raise _UsageError(f"unknown family {family!r}")


FAMILIES = ("fixture-U", "fixture-V", "family3", "saturating", "3dim-3N", "2xn", "i3i2bell", "tc-rho-ac")


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ebspace", description="EB subspace certification, constructions and EOF tools.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", help="certify a space document")
    c.add_argument("--space", required=True)
    c.add_argument("--budget", type=int, default=200)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--tol", type=float, default=1e-9)

    k = sub.add_parser("construct", help="write a space (or state) document")
    k.add_argument("--family", required=True, choices=FAMILIES)
    k.add_argument("params", nargs="*", help="key=value parameters")
    k.add_argument("-o", "--output", required=True)

    e = sub.add_parser("eof", help="entanglement of formation of a state document")
    e.add_argument("--state", required=True)
    e.add_argument("--cut", type=int, nargs=2, required=True, metavar=("DA", "DB"))
    e.add_argument("--method", choices=("auto", "wootters", "roof"), default="auto")
    e.add_argument("--restarts", type=int, default=50)
    e.add_argument("--seed", type=int, default=DEFAULT_SEED)

    a = sub.add_parser("additivity", help="additivity gap on a certified space")
    a.add_argument("--space", required=True)
    a.add_argument("--state", required=True)
    a.add_argument("--sigma", required=True)
    a.add_argument("--restarts", type=int, default=50)
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)

    t = sub.add_parser("tc", help="Tavis-Cummings EOF / EB / cost curve as CSV")
    t.add_argument("--alpha", type=float, required=True)
    t.add_argument("--beta", type=float, required=True)
    t.add_argument("--coupling", type=float, default=1.0)
    t.add_argument("--t0", type=float, default=0.0)
    t.add_argument("--t1", type=float, required=True)
    t.add_argument("--steps", type=int, required=True)
    t.add_argument("--restarts", type=int, default=30)
    t.add_argument("--seed", type=int, default=DEFAULT_SEED)
    t.add_argument("-o", "--output", required=True)

    s = sub.add_parser("scan-nonadditive", help="scan the non-additivity candidate family")
    s.add_argument("--grid", type=int, default=5)
    s.add_argument("--restarts", type=int, default=20)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return ap


def _print(obj, out: IO[str]) -> None:
    out.write(canonical_json(_jsonable(obj)) + "\n")


def run_cli(argv: Sequence[str] | None = None, stdout: IO[str] | None = None, stderr: IO[str] | None = None) -> int:
    """Run one command; returns the exit code."""
    out = sys.stdout if stdout is None else stdout
    err = sys.stderr if stderr is None else stderr
    try:
        args = _parser().parse_args(list(sys.argv[1:] if argv is None else argv))
        return _dispatch(args, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except _UsageError as exc:
        err.write(f"ebspace: usage error: {exc}\n")
    except OSError as exc:
        err.write(f"ebspace: file error: {exc}\n")
    except (EBSpaceError, ValueError, ArithmeticError, KeyError) as exc:
        err.write(f"ebspace: {type(exc).__name__}: {exc}\n")
    return EXIT_ERROR


def _dispatch(args, out: IO[str]) -> int:
    if args.command == "certify":
        space = parse_document(_read(args.space)).space
        v = certify(space, budget=args.budget, seed=args.seed, tol=args.tol)
        _print(verdict_report(v), out)
        return EXIT_CODES[v.status]
    if args.command == "construct":
        obj, meta = _build(args.family, _kv(args.params))
        if isinstance(obj, DensityOperator):
            _write(args.output, serialize_state(obj))
        else:
            _write(args.output, serialize_space(obj, {"family": args.family, **(meta or {})}))
        return 0
    if args.command == "eof":
        rho = parse_state(_read(args.state))
        rho = DensityOperator(rho.matrix, tuple(args.cut))
        value = eof(rho, method=args.method, restarts=args.restarts, seed=args.seed)
        _print({"eof": value, "method": args.method, "cut": list(args.cut)}, out)
        return 0
    if args.command == "additivity":
        space = parse_document(_read(args.space)).space
        rho = parse_state(_read(args.state))
        sigma = parse_state(_read(args.sigma))
        rho = DensityOperator(rho.matrix, (space.dA, space.dB))
        rep = additivity_check(rho, sigma, restarts=args.restarts, seed=args.seed, space=space)
        _print({"lhs": rep.lhs, "rhs": rep.rhs, "gap": rep.gap, "ef_rho": rep.ef_rho,
                "ef_sigma": rep.ef_sigma, "route": rep.verdict.route}, out)
        return 0
    if args.command == "tc":
        if args.steps < 1:
            raise _UsageError("--steps must be positive")
        p0 = TCParams(args.alpha, args.beta, args.coupling)
        grid = np.linspace(args.t0, args.t1, args.steps)
        rows = tc_curve(p0, grid, restarts=args.restarts, seed=args.seed)
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            emit_csv(rows, fh)
        return 0
    if args.command == "scan-nonadditive":
        bell = DensityOperator(np.outer(BELL, BELL), (2, 2))
        rep = scan_nonadditivity(args.grid, bell, restarts=args.restarts, seed=args.seed)
        _print({"min_gap": rep.min_gap, "argmin": {"angle": rep.argmin[0], "p": rep.argmin[1], "q": rep.argmin[2]},
                "points": int(rep.gaps.size), "flagged": rep.flagged, "slack": rep.slack}, out)
        return 0
    raise _UsageError(f"unknown command {args.command!r}")


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
