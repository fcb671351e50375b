"""Compiled kernel vs pure-Python fallback on exhaustive bad-sequence search.

Each kernel runs in its own interpreter, selected with WQOLEN_PURE_PYTHON,
and reports the best of ``--repeat`` timings per workload::

    python3 benchmarks/bench_kernel.py [--repeat 3] [--json]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = [
    ("G2^*", 3),
    ("N * N", 3),
    ("N * G3", 3),
    ("Seg4 * Seg4", 3),
    ("G1^* * G2", 5),
]

_CHILD = r"""
import json, sys, time
from wqolen import kernel
from wqolen.control import SUCC
from wqolen.nwqo import max_bad_length, parse_nwqo

repeat = int(sys.argv[1])
rows = []
for text, n in json.loads(sys.argv[2]):
    a = parse_nwqo(text)
    best, length = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        length, _ = max_bad_length(a, SUCC, n, memo=True)
        best = min(best, time.perf_counter() - start)
    rows.append({"expr": text, "n": n, "length": length, "seconds": best})
print(json.dumps({"compiled": kernel.COMPILED, "rows": rows}))
"""


def measure(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("WQOLEN_PURE_PYTHON", None)
    if pure:
        env["WQOLEN_PURE_PYTHON"] = "1"
    proc = subprocess.run(
        [sys.executable, "-c", _CHILD, str(repeat), json.dumps(WORKLOADS)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    fast, slow = measure(False, args.repeat), measure(True, args.repeat)
    if not fast["compiled"]:
        print("note: compiled kernel not importable; both columns are pure Python", file=sys.stderr)
    rows = []
    for c, p in zip(fast["rows"], slow["rows"]):
        assert c["length"] == p["length"], (c, p)
        rows.append({**c, "pure_seconds": p["seconds"], "speedup": p["seconds"] / max(c["seconds"], 1e-9)})
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'workload':<18}{'L':>6}{'compiled s':>12}{'pure s':>10}{'speedup':>9}")
    for r in rows:
        name = f"{r['expr']} @{r['n']}"
        print(f"{name:<18}{r['length']:>6}{r['seconds']:>12.4f}{r['pure_seconds']:>10.4f}{r['speedup']:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
