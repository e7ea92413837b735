"""Shared test helpers.

Exposes the repo paths, an in-process CLI runner, and the acceptance-line
collector: acceptance tests append one PASS/FAIL line per criterion and the
terminal-summary hook prints them as a block at the end of the run.
"""

from __future__ import annotations

import io
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
SPECS_DIR = REPO_ROOT / "specs"
DATA_DIR = Path(__file__).resolve().parent / "data"

CORPUS = (
    "useq.spec",
    "wseq.spec",
    "apery.spec",
    "odd-cubic.spec",
    "odd-mixed.spec",
    "odd-deep.spec",
)

ACCEPTANCE_LINES: list[str] = []


def run_cli(*argv: str) -> tuple[int, str, str]:
    """Run the CLI in-process; returns (exit_code, stdout, stderr)."""
    from recint.cli import main

    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
