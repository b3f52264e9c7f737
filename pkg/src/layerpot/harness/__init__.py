"""Configuration-driven verification harness and CLI."""

from .config import SuiteConfig, parse_config
from .report import Row, write_report
from .runner import run_bound, run_converge, run_table, run_verify

__all__ = [
    "Row",
    "SuiteConfig",
    "parse_config",
    "run_bound",
    "run_converge",
    "run_table",
    "run_verify",
    "write_report",
]
