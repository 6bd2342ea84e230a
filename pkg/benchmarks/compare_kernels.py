#!/usr/bin/env python3
"""Benchmark the compiled word kernel against the pure-Python fallback.

Kernel-level timings call the two implementations directly; the
end-to-end rows rerun this interpreter with COXKIT_PURE_PY toggled so the
selector picks each kernel in a fresh process.

Usage: python benchmarks/compare_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

from coxkit import _wordops_py as py

try:
    from coxkit import _wordops_c as cc
except ImportError:
    cc = None


def timed(fn, *args) -> float:
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def bench_braid(impl, words):
    for w in words:
        impl.braid_closure(w)


def bench_collect(impl, jobs):
    for k, comm, pairs in jobs:
        for x, y in pairs:
            impl.collect_mul(x, y, k, comm)


def end_to_end(pure: bool, radius: int) -> float:
    env = dict(os.environ)
    env.pop("COXKIT_PURE_PY", None)
    if pure:
        env["COXKIT_PURE_PY"] = "1"
    code = (
        "import time; t0=time.perf_counter();"
        "from coxkit.coxeter import Coxeter;"
        "from coxkit.lemmas import verify_not_both_down;"
        f"W=Coxeter(max_radius={radius}); W.ball({radius});"
        f"verify_not_both_down(W, {radius});"
        "print(time.perf_counter()-t0)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()
    if cc is None:
        print("compiled kernel not built; run pip install -e . first")
        return 1

    import random

    from coxkit.blueprint import GroupCache
    from coxkit.coxeter import standard_coxeter

    radius = 9 if args.quick else 10
    W = standard_coxeter()
    words = W.sphere(radius)
    rng = random.Random(0)
    jobs = []
    for w in W.sphere(6 if args.quick else 7):
        g = GroupCache(W).group(w)
        pairs = [(rng.randrange(g.order), rng.randrange(g.order))
                 for _ in range(200)]
        jobs.append((g.k, g._comm, pairs))
        if len(jobs) >= (10 if args.quick else 25):
            break

    rows = []
    rows.append(("braid closure, sphere(%d)" % radius,
                 timed(bench_braid, py, words),
                 timed(bench_braid, cc, words)))
    rows.append(("collection, %d groups x200" % len(jobs),
                 timed(bench_collect, py, jobs),
                 timed(bench_collect, cc, jobs)))
    e2e_radius = 6 if args.quick else 8
    rows.append((f"cold ball({e2e_radius}) + length-lemma sweep",
                 end_to_end(True, e2e_radius),
                 end_to_end(False, e2e_radius)))

    print(f"{'benchmark':44} {'python':>9} {'compiled':>9} {'speedup':>8}")
    for name, t_py, t_c in rows:
        print(f"{name:44} {t_py:8.3f}s {t_c:8.3f}s {t_py / t_c:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
