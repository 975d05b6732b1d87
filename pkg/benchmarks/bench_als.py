#!/usr/bin/env python3
"""Benchmark the factor-model fit under both kernel backends.

The backend flag is read at import time, so each timing runs in a fresh
subprocess: once with numba enabled (default) and once forced onto the
pure-numpy path via ASSORTIFY_NUMBA=0. The first jit call pays compilation,
so the compiled backend is timed on a second in-process repeat as well.

Usage: python3 benchmarks/bench_als.py [--products N] [--stores M]
       [--rank D] [--iterations I] [--density F] [--repeats R]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

_CHILD_SNIPPET = r"""
import json, sys, time
import numpy as np
from assortify import AlsConfig, SalesMatrix, fit_als
from assortify._kernels import NUMBA_ENABLED

params = json.loads(sys.argv[1])
rng = np.random.default_rng(11)
n, m = params["products"], params["stores"]
clean = (
    rng.uniform(0.2, 1.0, (n, params["rank"])) @ rng.uniform(0.2, 1.0, (m, params["rank"])).T * 10
    + rng.uniform(0, 3, n)[:, None] + rng.uniform(0, 3, m)[None, :]
)
mask = rng.random((n, m)) < params["density"]
pi, si = np.nonzero(mask)
matrix = SalesMatrix(n, m, pi, si, clean[pi, si], np.ones(pi.size))
config = AlsConfig(rank=params["rank"], reg_lambda=0.05,
                   n_iterations=params["iterations"], seed=0, convergence_tol=0.0)

timings = []
for _ in range(params["repeats"]):
    start = time.perf_counter()
    model = fit_als(matrix, config)
    timings.append(time.perf_counter() - start)
print(json.dumps({
    "backend": "numba" if NUMBA_ENABLED else "numpy",
    "timings": timings,
    "final_loss": model.final_loss,
}))
"""


def run_child(params: dict, numba: bool) -> dict:
    env = dict(os.environ)
    env["ASSORTIFY_NUMBA"] = "1" if numba else "0"
    out = subprocess.run(
        [sys.executable, "-c", _CHILD_SNIPPET, json.dumps(params)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--products", type=int, default=800)
    parser.add_argument("--stores", type=int, default=120)
    parser.add_argument("--rank", type=int, default=6)
    parser.add_argument("--iterations", type=int, default=15)
    parser.add_argument("--density", type=float, default=0.5)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    params = vars(args)

    print(
        f"fit benchmark: {args.products}x{args.stores}, rank {args.rank}, "
        f"{args.iterations} iterations, density {args.density}"
    )
    results = {}
    for numba in (True, False):
        result = run_child(params, numba)
        results[result["backend"]] = result
        timings = result["timings"]
        label = result["backend"]
        first = timings[0]
        rest = min(timings[1:]) if len(timings) > 1 else first
        print(f"  {label:>5}: first {first:8.3f}s   best-of-rest {rest:8.3f}s")

    if {"numba", "numpy"} <= set(results):
        best_numba = min(results["numba"]["timings"][1:] or results["numba"]["timings"])
        best_numpy = min(results["numpy"]["timings"][1:] or results["numpy"]["timings"])
        print(f"  speedup (warm): {best_numpy / best_numba:.1f}x")
        loss_gap = abs(results["numba"]["final_loss"] - results["numpy"]["final_loss"])
        print(f"  final-loss agreement: |delta| = {loss_gap:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
