"""
Command-line front end.

    hardycs classify --elliptic a=0.5 omega=exp(2pi*i/3)
    hardycs classify --involution a=0.5+0i
    hardycs classify --num 0,1 --den 1,0
    hardycs obstruction --a 0.5 --format json
    hardycs sweep --grid 0.1:0.8:0.1x8 --format csv --out sweep.csv --jobs 4
    hardycs verify

Exit codes: 0 ok, 1 verification failure (or a non-positive gap in a sweep),
2 usage, 3 not an automorphism, 4 depth insufficient, 5 internal mismatch.
"""
from __future__ import annotations

import argparse
import ast
import cmath
import json
import math
import operator
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Dict, List, Optional, Sequence

from . import moebius, obstruction, verify
from .errors import DepthInsufficient, FixedPointAtOrigin, HardyError, InternalMismatch, NotAutomorphism
from .moebius import MoebiusMap
from .obstruction import Check
from .report import ReportSummary, SweepRow, rows_to_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_AUTO, EXIT_DEPTH, EXIT_MISMATCH = 0, 1, 2, 3, 4, 5
MIN_DEPTH = 16


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_FUNCS = {"exp": cmath.exp, "sqrt": cmath.sqrt, "cos": cmath.cos, "sin": cmath.sin}
_NAMES = {"pi": math.pi, "e": math.e, "j": 1j}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return node.value
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval(node.operand))
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1:
        return _FUNCS[node.func.id](_eval(node.args[0]))
    raise ValueError("unsupported expression")


def parse_complex(text: str) -> complex:
    """'0.5', '0.3-0.2i', '2i', 'exp(2pi*i/3)', '0.8*exp(i*pi/4)'."""
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty complex number")
    s = re.sub(r"(\d)(pi|i|j)\b", r"\1*\2", s)  # 2pi -> 2*pi, 0.2i -> 0.2*i
    s = re.sub(r"\bi\b", "j", s)
    try:
        z = complex(_eval(ast.parse(s, mode="eval")))
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError, OverflowError) as e:
        raise UsageError(f"cannot parse complex number {text!r}") from e
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UsageError(f"non-finite complex number {text!r}")
    return z


def parse_list(text: str) -> List[complex]:
    return [parse_complex(t) for t in text.split(",")]


def parse_kv(items: Sequence[str], keys: Sequence[str]) -> Dict[str, complex]:
    out = {}
    for it in items:
        k, sep, v = it.partition("=")
        if not sep or k not in keys:
            raise UsageError(f"expected one of {', '.join(k + '=<c>' for k in keys)}, got {it!r}")
        out[k] = parse_complex(v)
    missing = [k for k in keys if k not in out]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")
    return out


_RANGE = re.compile(r"^([^:]+):([^:]+):([^:x]+)x(\d+)$")


def parse_grid(spec: str) -> List[complex]:
    """'lo:hi:stepxP' (moduli lo..hi, P equally spaced phases) or a comma list of points."""
    spec = spec.strip()
    if not spec:
        raise UsageError("empty grid")
    m = _RANGE.match(spec)
    if m:
        lo, hi, step = (float(m.group(i)) for i in (1, 2, 3))
        phases = int(m.group(4))
        if step <= 0 or hi < lo or phases < 1:
            raise UsageError(f"bad grid range {spec!r}")
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return verify.default_grid([round(lo + k * step, 12) for k in range(n)], phases)
    return parse_list(spec)


@dataclass
class RunConfig:
    depth: int = 256
    grid: List[complex] = field(default_factory=verify.default_grid)
    tolerances: Dict[str, float] = field(default_factory=dict)
    fmt: str = "text"
    out: Optional[str] = None

    def __post_init__(self):
        if self.depth < MIN_DEPTH:
            raise UsageError(f"depth must be >= {MIN_DEPTH}")
        if not self.grid:
            raise UsageError("empty grid")
        bad = [a for a in self.grid if not 0 < abs(a) < 1]
        if bad:
            raise UsageError(f"grid moduli must lie in (0, 1): {bad[0]}")


def parse_tolerances(items: Optional[Sequence[str]]) -> Dict[str, float]:
    out = {}
    for it in items or ():
        k, sep, v = it.partition("=")
        try:
            out[k] = float(v)
        except ValueError:
            sep = ""
        if not sep:
            raise UsageError(f"expected NAME=TOL, got {it!r}")
    return out


def rejudge(checks: Sequence[Check], tolerances: Dict[str, float]) -> List[Check]:
    """Apply tolerance overrides; names match with or without a module prefix."""
    out = []
    for c in checks:
        tol = tolerances.get(c.name, tolerances.get(c.name.split(".", 1)[-1]))
        out.append(c if tol is None else Check.within(c.name, c.delta, tol))
    return out


# ---------------------------------------------------------------- output


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _c(z: complex) -> str:
    return f"{z.real + 0.0:.12g}{z.imag + 0.0:+.12g}i"


def _check_line(c: Check) -> str:
    return f"{'PASS' if c.passed else 'FAIL'}  {c.name:<52s} delta={c.delta:.3e} tol={c.tol:.1e}"


def _symbol(args) -> MoebiusMap:
    given = [x is not None for x in (args.elliptic, args.involution)] + [args.num is not None or args.den is not None]
    if sum(given) != 1:
        raise UsageError("give exactly one of --num/--den, --elliptic, --involution")
    if args.elliptic is not None:
        kv = parse_kv(args.elliptic, ("a", "omega"))
        return moebius.build_elliptic(kv["a"], kv["omega"])
    if args.involution is not None:
        return moebius.involution(parse_kv(args.involution, ("a",))["a"])
    if args.num is None or args.den is None:
        raise UsageError("--num and --den go together")
    try:
        return MoebiusMap.from_coeffs(parse_list(args.num), parse_list(args.den))
    except ValueError as e:
        raise UsageError(str(e)) from e


# ---------------------------------------------------------------- commands


def cmd_classify(args) -> int:
    phi = _symbol(args)
    cls = moebius.classify(phi)
    v = obstruction.verdict(phi, args.depth)
    if args.format == "json":
        d = {
            "kind": cls.kind.value,
            "fixed_point_in_disk": None if cls.fixed_point_in_disk is None else _c(cls.fixed_point_in_disk),
            "multiplier": None if cls.multiplier is None else _c(cls.multiplier),
            "boundary_fixed_points": [_c(z) for z in cls.boundary_fixed_points or ()],
            "verdict": v.kind.value,
            "complex_symmetric": v.kind.complex_symmetric,
            "evidence": v.evidence,
            "gap": v.gap,
        }
        _emit(json.dumps(d, indent=2) + "\n", args.out)
    else:
        lines = [f"kind: {cls.kind.value}"]
        if cls.fixed_point_in_disk is not None:
            lines.append(f"fixed point: {_c(cls.fixed_point_in_disk)}")
        if cls.multiplier is not None:
            lines.append(f"multiplier: {_c(cls.multiplier)}")
        if cls.boundary_fixed_points:
            lines.append("boundary fixed points: " + ", ".join(_c(z) for z in cls.boundary_fixed_points))
        lines += [f"verdict: {v.kind.value}", f"evidence: {v.evidence}"]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_obstruction(args) -> int:
    a = parse_complex(args.a)
    obstruction.constants(a)  # a = 0 and |a| >= 1 stop here with their own message
    cfg = RunConfig(depth=args.depth, grid=[a], fmt=args.format, out=args.out, tolerances=parse_tolerances(args.tol))
    r = obstruction.run(a, cfg.depth)
    s = ReportSummary.from_report(r)
    s = replace(s, checks=tuple(rejudge(s.checks, cfg.tolerances)))
    if cfg.fmt == "json":
        _emit(json.dumps(s.to_dict(), indent=2) + "\n", cfg.out)
    elif cfg.fmt == "csv":
        row = replace(SweepRow.from_report(r), status=_status(s.checks))
        _emit(rows_to_csv([row]), cfg.out)
    else:
        lines = [
            f"a = {_c(a)}   depth {s.depth} (working {s.working_depth})",
            f"rho = {_c(s.rho)}   rho~ = {_c(s.rho_tilde)}   |c0| = {s.c0_abs:.15g}",
            "c     : " + " ".join(_c(x) for x in s.c),
            "delta : " + " ".join(_c(x) for x in s.delta),
            "b     : " + " ".join(_c(x) for x in s.b),
            f"||h0||^2 = {s.h0_sq:.15g}",
            f"||f||^2 actual = {s.f_actual:.15g}   required = {s.f_required:.15g}   gap = {s.gap:.15g}",
            "",
        ]
        lines += [f"note: {n}" for n in s.erratum_notes]
        lines += [_check_line(c) for c in s.checks]
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if all(c.passed for c in s.checks) else EXIT_MISMATCH


def _status(checks: Sequence[Check]) -> str:
    failed = [c.name for c in checks if not c.passed]
    return "ok" if not failed else "failed:" + "|".join(failed)


def sweep_point(a: complex, depth: int, tolerances: Dict[str, float]) -> SweepRow:
    try:
        r = obstruction.run(a, depth)
    except HardyError as e:
        return SweepRow(complex(a), status=f"error:{type(e).__name__}")
    row = SweepRow.from_report(r)
    return replace(row, status=_status(rejudge(r.checks, tolerances)))


def cmd_sweep(args) -> int:
    grid = verify.default_grid() if args.grid is None else parse_grid(args.grid)
    cfg = RunConfig(depth=args.depth, grid=grid, fmt=args.format, out=args.out, tolerances=parse_tolerances(args.tol))
    fn = partial(sweep_point, depth=cfg.depth, tolerances=cfg.tolerances)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(fn, cfg.grid))  # map keeps grid order
    else:
        rows = [fn(a) for a in cfg.grid]
    if cfg.fmt == "csv":
        _emit(rows_to_csv(rows), cfg.out)
    elif cfg.fmt == "json":
        d = {"schema": "hs-1", "depth": cfg.depth, "rows": [dict(zip(
            ("abs_a", "arg_a", "actual", "required", "gap", "max_crosscheck_delta", "status"),
            [abs(r.a), cmath.phase(r.a), r.actual, r.required, r.gap, r.max_crosscheck_delta, r.status])) for r in rows]}
        _emit(json.dumps(d, indent=2) + "\n", cfg.out)
    else:
        lines = [f"{'|a|':>6s} {'arg a':>8s} {'actual':>18s} {'required':>18s} {'gap':>18s} {'max delta':>10s}  status"]
        for r in rows:
            if r.gap is None:
                lines.append(f"{abs(r.a):6.3f} {cmath.phase(r.a):8.4f} {'':>18s} {'':>18s} {'':>18s} {'':>10s}  {r.status}")
            else:
                lines.append(
                    f"{abs(r.a):6.3f} {cmath.phase(r.a):8.4f} {r.actual:18.12f} {r.required:18.12f} "
                    f"{r.gap:18.12f} {r.max_crosscheck_delta:10.2e}  {r.status}"
                )
        _emit("\n".join(lines) + "\n", cfg.out)
    for r in rows:
        if r.gap is None:
            print(f"a = {_c(r.a)}: {r.status}", file=sys.stderr)
    return EXIT_OK if all(r.gap > 0 for r in rows if r.gap is not None) else EXIT_FAIL


def cmd_verify(args) -> int:
    grid = None if args.grid is None else parse_grid(args.grid)
    cfg = RunConfig(depth=args.depth, grid=grid or verify.default_grid(), fmt=args.format, out=args.out,
                    tolerances=parse_tolerances(args.tol))
    res = verify.run_all(cfg.depth, cfg.grid, args.jobs, mutate_rho=args.mutate_rho)
    checks = rejudge(res.checks, cfg.tolerances)
    ok = all(c.passed for c in checks)
    if cfg.fmt == "json":
        d = {"schema": "hs-1", "depth": cfg.depth, "ok": ok, "info": res.info,
             "checks": [{"name": c.name, "delta": c.delta if math.isfinite(c.delta) else "inf", "tol": c.tol,
                         "passed": c.passed} for c in checks]}
        _emit(json.dumps(d, indent=2) + "\n", cfg.out)
    else:
        lines = [_check_line(c) for c in checks] + [f"info: {s}" for s in res.info]
        lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- entry


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hardycs", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "csv", "text")):
        sp.add_argument("--depth", type=int, default=256, help="truncation depth (>= 16); escalated as needed")
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    c = sub.add_parser("classify", help="classify an automorphism and decide complex symmetry of C_phi")
    c.add_argument("--num", help="numerator coefficients, constant term first: b,a for a z + b")
    c.add_argument("--den", help="denominator coefficients, constant term first")
    c.add_argument("--elliptic", nargs="+", metavar="KEY=C", help="a=<c> omega=<c>")
    c.add_argument("--involution", nargs="+", metavar="KEY=C", help="a=<c>")
    common(c, ("json", "text"))

    o = sub.add_parser("obstruction", help="full obstruction report at one fixed point a")
    o.add_argument("--a", required=True)
    o.add_argument("--tol", nargs="+", metavar="NAME=TOL", help="tolerance overrides")
    common(o)

    s = sub.add_parser("sweep", help="obstruction gap over a grid of fixed points")
    s.add_argument("--grid", metavar="SPEC", help="lo:hi:stepxPHASES or a comma list of points")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--tol", nargs="+", metavar="NAME=TOL")
    common(s)

    v = sub.add_parser("verify", help="run every invariant check")
    v.add_argument("--grid", metavar="SPEC")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--tol", nargs="+", metavar="NAME=TOL")
    v.add_argument("--mutate-rho", action="store_true", help=argparse.SUPPRESS)
    common(v, ("json", "text"))
    return p


COMMANDS = {"classify": cmd_classify, "obstruction": cmd_obstruction, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, FixedPointAtOrigin) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NotAutomorphism as e:
        print(f"not an automorphism: {e}", file=sys.stderr)
        return EXIT_NOT_AUTO
    except DepthInsufficient as e:
        print(f"depth insufficient: {e} (raise --depth)", file=sys.stderr)
        return EXIT_DEPTH
    except InternalMismatch as e:
        print(f"internal mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except (HardyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
