"""Configuration, experiment runners, result records, and the CLI."""

from .config import RunConfig, load_config
from .records import emit_plotdata, read_records, write_records
from .runner import run, sweep
from .lemmas import run_lemma_suite

__all__ = [
    "RunConfig",
    "load_config",
    "emit_plotdata",
    "read_records",
    "write_records",
    "run",
    "sweep",
    "run_lemma_suite",
]
