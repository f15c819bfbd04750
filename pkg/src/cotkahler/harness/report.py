"""Serialise check reports as JSON, a text table, or a residual CSV."""

from __future__ import annotations

import csv
import io
import json
import math

from ..errors import ConfigError
from .suite import CheckReport, HscScan

FORMATS = ("json", "text", "csv-residuals")


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def report_dict(report: CheckReport) -> dict:
    checks = []
    for r in report.checks:
        row = {
            "name": r.name,
            "paper_ref": r.paper_ref,
            "points": r.points,
            "max_residual": _num(r.max_residual),
            "tolerance": r.tolerance,
            "pass": r.passed,
            "bound": r.bound,
            "in_verdict": r.in_verdict,
        }
        if r.note is not None:
            row["note"] = r.note
        elif not math.isfinite(r.max_residual):
            row["note"] = "non-finite residual"
        checks.append(row)
    out = {"config": report.config, "checks": checks, "overall_pass": report.overall_pass,
           "runtime_ms": _num(report.runtime_ms)}
    if report.einstein_constant is not None:
        out["einstein_constant"] = report.einstein_constant
    if report.admissibility is not None:
        out["admissibility"] = report.admissibility.to_dict()
    if report.aborted:
        out["aborted"] = report.aborted
    return out


def _json(report):
    return json.dumps(report_dict(report), indent=2) + "\n"


def _text(report: CheckReport) -> str:
    lines = [f"configuration: {json.dumps(report.config)}"]
    if report.aborted:
        lines.append(f"ABORTED - {report.aborted}")
        if report.admissibility is not None:
            for row in report.admissibility.to_dict()["conditions"]:
                state = "ok" if row["pass"] else f"FAIL (first at t = {row['first_failure_t']})"
                lines.append(f"  {row['condition']:<40} {state}")
        lines.append("overall: FAIL")
        return "\n".join(lines) + "\n"
    if report.einstein_constant is not None:
        lines.append(f"einstein constant cn/A = {report.einstein_constant!r}")
    lines.append(f"{'check':<30} {'bound':<6} {'worst':>12} {'tolerance':>10}  result")
    for r in report.checks:
        if r.note == "not applicable (flat)":
            verdict = "n/a (flat)"
        else:
            verdict = "pass" if r.passed else "FAIL"
        if not r.in_verdict:
            verdict += " [informational]"
        lines.append(f"{r.name:<30} {r.bound:<6} {r.max_residual:>12.3e} {r.tolerance:>10.1e}  {verdict}")
    lines.append(f"overall: {'PASS' if report.overall_pass else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _vec(v) -> str:
    return ",".join(repr(float(a)) for a in v)


def _csv(report: CheckReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=";", lineterminator="\n")
    w.writerow(["x", "p", "t", "check", "residual"])
    for r in report.residuals:
        w.writerow([_vec(r.x), _vec(r.p), repr(float(r.t)), r.check, repr(float(r.residual))])
    return buf.getvalue()


def emit_report(report: CheckReport, fmt: str) -> str:
    if fmt == "json":
        return _json(report)
    if fmt == "text":
        return _text(report)
    if fmt == "csv-residuals":
        return _csv(report)
    raise ConfigError(f"unknown report format {fmt!r}; choose from {', '.join(FORMATS)}")


def emit_scan(scan: HscScan) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=";", lineterminator="\n")
    w.writerow(["point", "x", "p", "t", "direction", "X", "H"])
    for r in scan.rows:
        w.writerow([r["point"], _vec(r["x"]), _vec(r["p"]), repr(r["t"]), r["direction"], _vec(r["X"]),
                    repr(r["H"])])
    w.writerow(["summary", "min", repr(scan.minimum), "max", repr(scan.maximum), "spread",
                repr(scan.spread)])
    w.writerow(["summary", "relative_spread", repr(scan.relative_spread), "", "", "", ""])
    return buf.getvalue()
