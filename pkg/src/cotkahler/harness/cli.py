"""Command line entry point.

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or
admissibility error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..errors import ConfigError
from ..params import check_admissibility
from .config import load_config
from .report import FORMATS, emit_report, emit_scan
from .suite import run_suite, scan_hsc

OVERRIDES = ["chart.n", "chart.c", "family.kind", "family.m", "family.B", "A", "points", "t_max",
             "seed", "h", "jobs"]


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cotkahler", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", type=Path)
        p.add_argument("--output", "-o", type=Path, help="write to a file instead of stdout")
        for key in OVERRIDES:
            p.add_argument(f"--{key}", dest=key, metavar="VALUE")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override any config key, e.g. --set tol.einstein=1e-8")

    verify = sub.add_parser("verify", help="run the full verification suite")
    common(verify)
    verify.add_argument("--format", choices=FORMATS, default="text")
    verify.add_argument("--timings", action="store_true", help="record runtime_ms (breaks byte-identity)")
    verify.add_argument("--include-eq28-literal", action="store_true",
                        help="count the literal-Q comparison towards the verdict")

    scan = sub.add_parser("scan-hsc", help="tabulate holomorphic sectional curvature")
    common(scan)
    scan.add_argument("--directions", type=int, default=100)

    adm = sub.add_parser("admissibility", help="check the lambda family on [0, t_max]")
    common(adm)
    return parser


def _overrides(args) -> dict:
    out = {key: getattr(args, key) for key in OVERRIDES if getattr(args, key) is not None}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    if getattr(args, "include_eq28_literal", False):
        out["include_eq28_literal"] = "true"
    return out


def _write(text: str, path: Path | None):
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
        if args.command == "admissibility":
            rep = check_admissibility(cfg.family(), cfg.c, cfg.t_max, cfg.admissibility_samples)
            _write(json.dumps(rep.to_dict(), indent=2) + "\n", args.output)
            return 0 if rep.passed else 2
        if args.command == "scan-hsc":
            _write(emit_scan(scan_hsc(cfg, args.directions)), args.output)
            return 0
        report = run_suite(cfg, timings=args.timings)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(emit_report(report, args.format), args.output)
    if report.aborted:
        return 2
    return 0 if report.overall_pass else 1


if __name__ == "__main__":
    sys.exit(main())
