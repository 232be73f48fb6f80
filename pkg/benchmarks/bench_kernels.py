#!/usr/bin/env python3
"""Compare the pure-Python and compiled kernel implementations.

Each hot kernel runs on a deterministic workload sized like the descent
computations (8-generator alphabet with mixed Koszul degrees, words up to
6 letters). Before timing anything the script checks that both
implementations return identical results, insertion order included, so a
speedup never hides a behaviour drift.

The final row reruns `liedescent verify-all --degree 4` in subprocesses,
once per implementation, because the kernel module is chosen once at
import time (LIEDESCENT_PURE_PY=1 forces the pure-Python twin).

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--skip-e2e]
"""

import argparse
import os
import random
import subprocess
import sys
import time

from liedescent import _kernel_py
from liedescent.rat import Q

try:
    from liedescent import _kernel_c
except ImportError:
    _kernel_c = None

# degrees of the level-3 descent alphabet: A, dA, x1, dx1, x2, dx2, x3, dx3
DEGS = (1, 2, 0, 1, 0, 1, 0, 1)
NMAX = 6


def _random_poly(rng, nwords, maxlen=NMAX):
    poly = {}
    while len(poly) < nwords:
        k = rng.randint(1, maxlen)
        w = tuple(rng.randrange(len(DEGS)) for _ in range(k))
        poly[w] = Q(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
    return poly


def _build_workloads():
    rng = random.Random(20260817)
    p = _random_poly(rng, 160)
    q = _random_poly(rng, 160)
    big = _random_poly(rng, 1200)
    words = [w for w in big for _ in range(3)]
    # generator images shaped like a coface substitution: x -> x + [x, y]
    images = {}
    for g in range(len(DEGS)):
        img = {(g,): Q(1)}
        img[(g, (g + 2) % len(DEGS))] = Q(1, 2)
        images[g] = img
    columns = []
    for _ in range(140):
        col = {}
        for _ in range(rng.randint(2, 9)):
            col[rng.randrange(400)] = Q(rng.choice([-2, -1, 1, 2]), rng.randint(1, 3))
        columns.append(col)

    def run_word_degree(mod):
        total = 0
        for w in words:
            total += mod.word_degree(w, DEGS)
        return total

    def run_cyclic_canonical(mod):
        return [mod.cyclic_canonical(w, DEGS) for w in words]

    def run_cyclic_reduce(mod):
        return mod.cyclic_reduce(big, DEGS)

    def run_poly_add_scaled(mod):
        acc = {}
        for i in range(40):
            mod.poly_add_scaled(acc, p, Q(i + 1, 3))
            mod.poly_add_scaled(acc, q, Q(-i, 2))
        return acc

    def run_poly_mul(mod):
        return mod.poly_mul(p, q, NMAX)

    def run_poly_bracket(mod):
        return mod.poly_bracket(p, q, DEGS, NMAX)

    def run_derivation_apply(mod):
        return mod.derivation_apply(big, images, DEGS, True, NMAX)

    def run_hom_apply(mod):
        return mod.hom_apply(big, images, NMAX)

    def run_column_echelon(mod):
        return mod.column_echelon([dict(c) for c in columns])

    return [
        ("word_degree", run_word_degree),
        ("cyclic_canonical", run_cyclic_canonical),
        ("cyclic_reduce", run_cyclic_reduce),
        ("poly_add_scaled", run_poly_add_scaled),
        ("poly_mul", run_poly_mul),
        ("poly_bracket", run_poly_bracket),
        ("derivation_apply", run_derivation_apply),
        ("hom_apply", run_hom_apply),
        ("column_echelon", run_column_echelon),
    ]


def _same(a, b):
    if isinstance(a, dict) and isinstance(b, dict):
        return list(a.items()) == list(b.items())
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return a == b


def _time(fn, mod, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mod)
        dt = time.perf_counter() - t0
        if best is None or dt < best:
            best = dt
    return best


def _fmt(seconds):
    if seconds >= 1.0:
        return f"{seconds:8.2f} s "
    return f"{seconds * 1e3:8.2f} ms"


def _bench_end_to_end(repeat):
    cmd = [sys.executable, "-m", "liedescent", "verify-all", "--degree", "4", "--format", "json"]
    out = {}
    for label, force in (("python", "1"), ("c", "")):
        env = dict(os.environ)
        env.pop("LIEDESCENT_PURE_PY", None)
        if force:
            env["LIEDESCENT_PURE_PY"] = force
        best = None
        for _ in range(repeat):
            t0 = time.perf_counter()
            proc = subprocess.run(cmd, env=env, stdout=subprocess.DEVNULL)
            dt = time.perf_counter() - t0
            if proc.returncode != 0:
                raise SystemExit(f"verify-all failed under impl {label!r}")
            if best is None or dt < best:
                best = dt
        out[label] = best
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions, best is kept")
    ap.add_argument("--skip-e2e", action="store_true", help="skip the verify-all subprocess row")
    args = ap.parse_args(argv)

    if _kernel_c is None:
        print("compiled kernel not built; timing the pure-Python implementation only")
    workloads = _build_workloads()

    rows = []
    for name, fn in workloads:
        if _kernel_c is not None and not _same(fn(_kernel_py), fn(_kernel_c)):
            raise SystemExit(f"implementations disagree on {name}")
        t_py = _time(fn, _kernel_py, args.repeat)
        t_c = _time(fn, _kernel_c, args.repeat) if _kernel_c is not None else None
        rows.append((name, t_py, t_c))

    if not args.skip_e2e and _kernel_c is not None:
        e2e = _bench_end_to_end(max(1, args.repeat // 2))
        rows.append(("verify-all --degree 4", e2e["python"], e2e["c"]))

    width = max(len(r[0]) for r in rows)
    header = f"{'workload':<{width}}  {'python':>11}  {'c':>11}  speedup"
    print(header)
    print("-" * len(header))
    for name, t_py, t_c in rows:
        if t_c is None:
            print(f"{name:<{width}}  {_fmt(t_py)}  {'':>11}")
        else:
            print(f"{name:<{width}}  {_fmt(t_py)}  {_fmt(t_c)}  {t_py / t_c:6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
