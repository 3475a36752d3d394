"""Regenerate tests/golden/*.out from tests/golden/cases.json.

Review every diff by hand before committing regenerated files.
"""
import json
import os
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).parent
cases = json.loads((HERE / "golden" / "cases.json").read_text())
env = {k: v for k, v in os.environ.items() if k != "MAXLIN_RTOL"}
for case in cases:
    proc = subprocess.run(
        [sys.executable, "-m", "maxlin", *case["argv"]], cwd=HERE / "fixtures", capture_output=True, env=env
    )
    (HERE / "golden" / f"{case['name']}.out").write_bytes(proc.stdout)
    flag = "" if proc.returncode == case["exit"] else f"  (expected exit {case['exit']})"
    print(f"{case['name']}: exit {proc.returncode}{flag}")
