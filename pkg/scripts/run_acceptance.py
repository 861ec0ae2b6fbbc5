#!/usr/bin/env python3
"""Run the acceptance suite and show one pass/fail line per criterion."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    code = subprocess.call(
        [
            sys.executable,
            "-m",
            "pytest",
            str(ROOT / "tests" / "test_acceptance.py"),
            "-q",
            "-s",
        ],
        cwd=ROOT,
    )
    sys.exit(code)
