"""Time the compiled and numpy kernel backends on the workloads the solvers produce.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Workloads:
  rref      Gauss-Jordan on the Translation Finding system (rows y^(p-1), p=3..7)
  sym       symmetric powers of every vector of F_p^n (the Line Lemma sweep inputs)
  line      exhaustive Line Lemma sweep at p=3, n=3 through the active backend
"""
import argparse
import json
import sys
import timeit

import numpy as np

from orbitcoset import _kernels
from orbitcoset import fp_algebra as fp


def _rref_case(mod, p, n, rows, seed=0):
    rng = np.random.default_rng(seed)
    ys = rng.integers(0, p, size=(rows, n))
    mat = np.hstack([fp.sym_power_matrix(ys, p, p - 1), np.ones((rows, 1), dtype=np.int64)])
    return lambda: mod.rref_modp(mat, p)


def _sym_case(mod, p, n):
    ys = fp.all_vectors(p, n)
    exps = np.array(fp.monomial_basis(n, p - 1), dtype=np.int64)
    return lambda: mod.monomial_eval(ys, exps, p)


def _line_sweep(mod):
    def run():
        saved = (fp.rref_modp, fp.monomial_eval)
        fp.rref_modp, fp.monomial_eval = mod.rref_modp, mod.monomial_eval
        try:
            vs = fp.all_vectors(3, 3)
            for z in vs:
                for y in vs:
                    fp.check_line_lemma(3, 3, z, y)
        finally:
            fp.rref_modp, fp.monomial_eval = saved
    return run


CASES = {
    "rref p=3 n=3 117x11": lambda m: _rref_case(m, 3, 3, 117),
    "rref p=5 n=3 300x16": lambda m: _rref_case(m, 5, 3, 300),
    "rref p=7 n=3 600x29": lambda m: _rref_case(m, 7, 3, 600),
    "sym p=5 n=4": lambda m: _sym_case(m, 5, 4),
    "sym p=7 n=3": lambda m: _sym_case(m, 7, 3),
    "line p=3 n=3": _line_sweep,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None, help="also write results here")
    args = ap.parse_args(argv)

    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; timing the fallback only", file=sys.stderr)
    rows = []
    print(f"{'case':<24}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for name, make in CASES.items():
        times = {}
        for b, mod in backends.items():
            fn = make(mod)
            number = 1 if name.startswith("line") else 20
            times[b] = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{name:<24}" + "".join(f"{times[b] * 1e3:>12.3f}ms" for b in backends) + f"{speed:>9.1f}x")
        rows.append({"case": name, **{f"{b}_seconds": t for b, t in times.items()}, "speedup": speed})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
