#!/usr/bin/env python3
"""Benchmark the equivalence search with and without the numba kernels.

Run directly; it re-executes itself once per kernel path:

    python3 benchmarks/bench_solver.py [--solves 5000]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_batch(solves: int) -> dict:
    import numpy as np

    from eqdose import TissueKind, TissueParams, TreatmentCourse, equivalent_dose
    from eqdose import kernels

    rng = np.random.default_rng(7)
    tissues = {
        ab: TissueParams(name=f"ab{ab:g}", kind=TissueKind.OAR, alpha_beta=ab,
                         alpha=0.35, mu=0.46, d_rec=0.0)
        for ab in (1.0, 2.0, 3.0, 10.0)
    }
    plans = []
    for _ in range(solves):
        ab = float(rng.choice([1.0, 2.0, 3.0, 10.0]))
        tissue = tissues[ab]
        n = int(rng.integers(1, 51))
        d = float(rng.uniform(0.5, 1.5 * tissue.d_t))
        plans.append(([TreatmentCourse(n=n, d=d)], tissue))

    # Warm once so JIT compilation is not measured.
    equivalent_dose(*plans[0])

    start = time.perf_counter()
    checksum = 0.0
    for courses, tissue in plans:
        checksum += equivalent_dose(courses, tissue).eqd
    elapsed = time.perf_counter() - start
    return {
        "numba": kernels.NUMBA_ENABLED,
        "solves": solves,
        "seconds": elapsed,
        "per_solve_us": elapsed / solves * 1e6,
        "checksum": checksum,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--solves", type=int, default=5000)
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.child:
        print(json.dumps(run_batch(args.solves)))
        return 0

    results = []
    for flag in ("1", "0"):
        env = dict(os.environ)
        env["EQDOSE_NUMBA"] = flag
        out = subprocess.run(
            [sys.executable, __file__, "--child", "--solves", str(args.solves)],
            capture_output=True, text=True, env=env,
        )
        if out.returncode != 0:
            print(out.stderr, file=sys.stderr)
            return out.returncode
        results.append(json.loads(out.stdout))

    fast, slow = results
    if fast["checksum"] != slow["checksum"]:
        print("WARNING: kernel paths disagree on results", file=sys.stderr)
    for r in results:
        label = "numba kernels" if r["numba"] else "numpy fallback"
        print(f"{label:15s} {r['solves']} solves in {r['seconds']:.3f} s "
              f"({r['per_solve_us']:.1f} us/solve)")
    if fast["numba"] and not slow["numba"]:
        print(f"speedup: {slow['seconds'] / fast['seconds']:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
