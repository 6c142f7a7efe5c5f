"""Run the acceptance criteria and print one PASS/FAIL line each."""
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    cmd = [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
           str(ROOT / "tests" / "test_acceptance.py")]
    sys.exit(subprocess.call(cmd, cwd=ROOT))
