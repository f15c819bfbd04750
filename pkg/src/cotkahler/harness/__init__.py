"""Configuration, verification suite, reporting and CLI."""

from .config import VerificationConfig, from_mapping, load_config, parse_text
from .report import emit_report, emit_scan, report_dict
from .suite import CHECKS, CheckReport, run_suite, sample_points, scan_hsc

__all__ = ["CHECKS", "CheckReport", "VerificationConfig", "emit_report", "emit_scan", "from_mapping",
           "load_config", "parse_text", "report_dict", "run_suite", "sample_points", "scan_hsc"]
