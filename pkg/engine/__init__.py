# Estimation engine shared by the CLI and the HTTP service
from engine.reports import CheckResult, CutNormReport, Report, VerifyReport
from engine.runner import EstimationRunner, bench_table, checks_table, reports_table, sweep_architectures

__all__ = [
    "CheckResult",
    "CutNormReport",
    "EstimationRunner",
    "Report",
    "VerifyReport",
    "bench_table",
    "checks_table",
    "reports_table",
    "sweep_architectures",
]
