"""
A small sweep and a re-checkable certificate
============================================

Sweep every group of order up to 12, then write a certificate for D(C3+C3)
and verify it from the JSON alone.
"""

import json
import tempfile
from pathlib import Path

from crossnum import make_certificate, parse_group, run_sweep, verify_certificate

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "sweep.jsonl"
    summary = run_sweep(12, out)
    print(f"{summary.groups} groups, violations {summary.violations}, partial {summary.partial}")
    for line in out.read_text().splitlines():
        rec = json.loads(line)
        rep = rec["report"]
        print(f"  {rec['group']:>10}  k={rep['k']['num']}/{rep['k']['den']}  "
              f"K={rep['K']['num']}/{rep['K']['den']}  verdicts ok={all(rep['verdicts'].values())}")

cert = make_certificate(parse_group("3,3"), "D")
print("\ncertificate value:", cert["value"], "witness:", cert["witnesses"][0])
print("verification:", verify_certificate(cert))

# tampering with the value is caught by the witness check
cert["value"] = {"num": 6, "den": 1}
print("after tampering:", verify_certificate(cert))
