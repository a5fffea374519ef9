"""Time the compiled kernels against the numpy fallback.

Run from the repository root after building the extension:

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each kernel is timed on the same inputs with both backends (best of
``--repeat`` runs), and the results are checked to agree.  A whole fast
construction is also timed in two subprocesses, one with
``HODNET_PURE_PYTHON=1``.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from hodnet import _kernels
from hodnet.criterion import _features
from hodnet.galois import primitive_element, smallest_irreducible

CONSTRUCTION = (
    "import time; from hodnet.cbc import cbc_construct_fast; from hodnet.criterion import Weights\n"
    "best = float('inf')\n"
    "for _ in range({repeat}):\n"
    "    t = time.perf_counter(); cbc_construct_fast(2, {m}, {s}, 2, 2, Weights.parse('1', {s}))\n"
    "    best = min(best, time.perf_counter() - t)\n"
    "print(best)\n"
)


def cases(rng):
    m = 16
    p = smallest_irreducible(2, m)
    g = primitive_element(p)
    yield "gf2_power_table m=16", lambda k: k.gf2_power_table(p.value, g.value, m)

    cols = rng.integers(0, 2**30, size=(40, 14))
    yield "gf2_span 40 x 2^14", lambda k: k.gf2_span(cols)

    L = 2**11 - 1
    w, x = rng.standard_normal(L), rng.standard_normal(L)
    yield "circulant_direct L=2047", lambda k: k.circulant_direct(w, x)

    pts = rng.random((1500, 4))
    gamma = np.array([1.0, 0.5, 0.25, 0.125])
    feat, tail = _features(pts, 2)
    yield "kernel_pair_sum N=1500 s=4", lambda k: k.kernel_pair_sum(pts, gamma, feat, tail)


def agree(a, b) -> bool:
    if isinstance(a, tuple):
        return all(agree(u, v) for u, v in zip(a, b))
    return bool(np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=1e-12, atol=1e-12))


def time_construction(pure: bool, m: int, s: int, repeat: int) -> float:
    env = dict(os.environ)
    env.pop("HODNET_PURE_PYTHON", None)
    if pure:
        env["HODNET_PURE_PYTHON"] = "1"
    code = CONSTRUCTION.format(m=m, s=s, repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args(argv)

    if _kernels.compiled is None:
        print("compiled extension not importable; build it with `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    rows = []
    print(f"{'kernel':32s} {'compiled':>12s} {'numpy':>12s} {'speedup':>8s}  agree")
    for name, fn in cases(rng):
        t = {}
        res = {}
        for k in (_kernels.compiled, _kernels.pure):
            res[k.NAME] = fn(k)
            t[k.NAME] = min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
        c, p = t[_kernels.compiled.NAME], t[_kernels.pure.NAME]
        ok = agree(res[_kernels.compiled.NAME], res[_kernels.pure.NAME])
        rows.append({"kernel": name, "compiled_s": c, "numpy_s": p, "agree": ok})
        print(f"{name:32s} {c:12.5f} {p:12.5f} {p / c:8.1f}  {ok}")

    m, s = 12, 20
    c = time_construction(False, m, s, args.repeat)
    p = time_construction(True, m, s, args.repeat)
    name = f"construction m={m} s={s}"
    rows.append({"kernel": name, "compiled_s": c, "numpy_s": p, "agree": None})
    print(f"{name:32s} {c:12.5f} {p:12.5f} {p / c:8.1f}")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if all(r["agree"] is not False for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
