"""Rerun the pipeline on the bundled mini-corpus and refresh tests/data/mini/golden/.

Review the diff by hand before committing: the golden files are the
reference for the end-to-end and export tests.

    python scripts/regen_golden.py
"""
import shutil
import sys
from pathlib import Path

from comention.cli import main

ROOT = Path(__file__).resolve().parents[1]
MINI = ROOT / "tests" / "data" / "mini"

if __name__ == "__main__":
    golden = MINI / "golden"
    shutil.rmtree(golden, ignore_errors=True)
    code = main(["run", "--config", str(MINI / "mini.conf"), "--output-dir", str(golden)])
    sys.exit(code)
