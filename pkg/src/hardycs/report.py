"""Machine-readable obstruction reports (JSON and CSV), schema "hs-1"."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .obstruction import Check, ObstructionReport

SCHEMA = "hs-1"
CSV_COLUMNS = ("abs_a", "arg_a", "actual", "required", "gap", "max_crosscheck_delta", "status")


def enc(z: complex) -> Dict[str, float]:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def dec(d) -> complex:
    if isinstance(d, dict):
        return complex(d["re"], d["im"])
    return complex(d)


@dataclass(frozen=True)
class ReportSummary:
    """The serialized face of an ObstructionReport."""

    a: complex
    depth: int
    working_depth: int
    rho: complex
    rho_tilde: complex
    c0_abs: float
    c: Tuple[complex, ...]
    delta: Tuple[complex, ...]
    b: Tuple[complex, ...]
    h0_sq: float
    f_actual: float
    f_required: float
    gap: float
    erratum_notes: Tuple[str, ...]
    checks: Tuple[Check, ...]
    schema: str = SCHEMA

    @classmethod
    def from_report(cls, r: ObstructionReport) -> "ReportSummary":
        k = r.constants
        return cls(
            a=k.a,
            depth=r.depth,
            working_depth=r.working_depth,
            rho=complex(k.rho),
            rho_tilde=complex(k.rho_tilde),
            c0_abs=float(k.c0_abs),
            c=tuple(complex(x) for x in r.c_seq),
            delta=tuple(complex(x) for x in r.delta_seq),
            b=tuple(complex(x) for x in r.b_seq),
            h0_sq=float(r.h0_norm2),
            f_actual=float(r.f_norm2_actual),
            f_required=float(r.f_norm2_required),
            gap=float(r.gap),
            erratum_notes=tuple(r.erratum_notes),
            checks=tuple(r.checks),
        )

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "a": enc(self.a),
            "depth": self.depth,
            "working_depth": self.working_depth,
            "constants": {"rho": enc(self.rho), "rho_tilde": enc(self.rho_tilde), "c0_abs": self.c0_abs},
            "sequences": {
                "c": [enc(x) for x in self.c],
                "delta": [enc(x) for x in self.delta],
                "b": [enc(x) for x in self.b],
            },
            "norms": {"h0_sq": self.h0_sq, "f_actual": self.f_actual, "f_required": self.f_required},
            "gap": self.gap,
            "erratum_notes": list(self.erratum_notes),
            "checks": [
                {"name": c.name, "delta": _jfloat(c.delta), "tol": c.tol, "passed": c.passed} for c in self.checks
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ReportSummary":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        k, s, n = d["constants"], d["sequences"], d["norms"]
        return cls(
            a=dec(d["a"]),
            depth=int(d["depth"]),
            working_depth=int(d["working_depth"]),
            rho=dec(k["rho"]),
            rho_tilde=dec(k["rho_tilde"]),
            c0_abs=float(k["c0_abs"]),
            c=tuple(dec(x) for x in s["c"]),
            delta=tuple(dec(x) for x in s["delta"]),
            b=tuple(dec(x) for x in s["b"]),
            h0_sq=float(n["h0_sq"]),
            f_actual=float(n["f_actual"]),
            f_required=float(n["f_required"]),
            gap=float(d["gap"]),
            erratum_notes=tuple(d["erratum_notes"]),
            checks=tuple(Check(c["name"], float(c["delta"]), float(c["tol"]), bool(c["passed"])) for c in d["checks"]),
            schema=d["schema"],
        )


def _jfloat(x: float):
    # JSON has no infinity; failed boolean-style checks carry inf
    return x if math.isfinite(x) else "inf"


@dataclass(frozen=True)
class SweepRow:
    a: complex
    actual: Optional[float] = None
    required: Optional[float] = None
    gap: Optional[float] = None
    max_crosscheck_delta: Optional[float] = None
    status: str = "ok"

    @classmethod
    def from_report(cls, r: ObstructionReport) -> "SweepRow":
        failed = [c.name for c in r.checks if not c.passed]
        return cls(
            a=r.a,
            actual=r.f_norm2_actual,
            required=r.f_norm2_required,
            gap=r.gap,
            max_crosscheck_delta=r.max_crosscheck_delta,
            status="ok" if not failed else "failed:" + "|".join(failed),
        )

    def values(self) -> List:
        def fmt(x):
            return "" if x is None else repr(float(x))

        return [
            repr(abs(self.a)),
            repr(math.atan2(self.a.imag, self.a.real)),
            fmt(self.actual),
            fmt(self.required),
            fmt(self.gap),
            fmt(self.max_crosscheck_delta),
            self.status,
        ]


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.values())
    return buf.getvalue()


def read_csv(text: str) -> List[Dict[str, str]]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))
