"""
Command-line interface
"""
from .main import RunConfig, RunOutcome, cli, run

__all__ = ["RunConfig", "RunOutcome", "cli", "run"]
