#!/usr/bin/env python3
"""Regenerate tests/data/wfg*_m*.txt from pymoo's WFG implementation.

Each line: the n decision values followed by the M objective values.
Usage: python3 tools/gen_wfg_golden.py [outdir]
"""
import sys
from pathlib import Path

import numpy as np
from pymoo.problems import get_problem

K, L, COUNT = 4, 20, 100


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240611)
    n = K + L
    upper = 2.0 * np.arange(1, n + 1)
    for m in (2, 5):
        k = K if K % (m - 1) == 0 else (m - 1)
        for p in range(1, 10):
            prob = get_problem(f"wfg{p}", n_var=n, n_obj=m, k=k)
            z = rng.random((COUNT, n)) * upper
            # a few corners to exercise the boundary corrections
            z[0] = 0.0
            z[1] = upper
            f = prob.evaluate(z)
            with open(out / f"wfg{p}_m{m}.txt", "w") as fh:
                fh.write(f"# WFG{p} M={m} k={k} l={n - k}\n")
                for zi, fi in zip(z, f):
                    fh.write(" ".join(repr(float(v)) for v in zi) + " "
                             + " ".join(repr(float(v)) for v in fi) + "\n")


if __name__ == "__main__":
    main()
