#!/usr/bin/env python3
"""Compare the compiled and pure-Python evaluation kernels.

Workload: every CK model with up to 3 worlds and one proposition,
evaluated against every formula of size up to the given bound over that
proposition, with both diamond clauses.

Run:  python3 benchmarks/bench_kernels.py [--max-size 5]
"""

import argparse
import time

import numpy as np

from ckkit._kernel import _evalpy
from ckkit.formula import enumerate_formulas
from ckkit.search import EnumParams, enumerate_packed
from ckkit.semantics import _pack_arrays, compile_formula

try:
    from ckkit._kernel import _evalcore
except ImportError:
    _evalcore = None


def run(kernel, programs, n, arrays, out):
    up, rel, fal, vals = arrays
    for prog in programs:
        kernel(prog.ops, prog.args, n, up, rel, fal, vals, out)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=5)
    ap.add_argument("--max-worlds", type=int, default=3)
    args = ap.parse_args()

    params = EnumParams(max_worlds=args.max_worlds, props=("p",))
    by_n = {}
    for pm in enumerate_packed(params):
        by_n.setdefault(pm.n, []).append(pm)
    formulas = enumerate_formulas(("p",), args.max_size)
    programs = [
        compile_formula(f, {"p": 0}, classical)
        for f in formulas
        for classical in (False, True)
    ]
    total_models = sum(len(v) for v in by_n.values())
    print(f"{total_models} models (<= {args.max_worlds} worlds), "
          f"{len(formulas)} formulas, {len(programs)} programs")

    kernels = [("python", _evalpy.eval_programs)]
    if _evalcore is not None:
        kernels.append(("compiled", _evalcore.eval_programs))
    else:
        print("compiled kernel not available; timing the fallback only")

    times = {}
    for name, kernel in kernels:
        start = time.perf_counter()
        for n, models in sorted(by_n.items()):
            arrays = _pack_arrays(models)
            out = np.empty(len(models), dtype=np.uint64)
            run(kernel, programs, n, arrays, out)
        elapsed = time.perf_counter() - start
        times[name] = elapsed
        rate = total_models * len(programs) / elapsed
        print(f"{name:>9}: {elapsed:8.3f} s  ({rate:,.0f} model-evals/s)")
    if len(times) == 2:
        print(f"speedup: {times['python'] / times['compiled']:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
