"""Compare the numba and numpy backends of the optimizer kernels.

Each backend runs in its own interpreter because the backend is fixed at
import time by ``EBSPACE_BACKEND``.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from ebspace import _kernels
from ebspace.certify import numeric_falsify
from ebspace.construct import fixtures
from ebspace.eof import convex_roof_eof
from ebspace.states import DensityOperator

repeat = int(sys.argv[1])
g = np.random.default_rng(7)
x = g.normal(size=(4, 3)) + 1j * g.normal(size=(4, 3))
rho = DensityOperator.from_unnormalized(x @ x.conj().T, (2, 2))
space = fixtures().spaceV

def timed(fn):
    fn()  # warm-up, includes compilation
    t = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t) / repeat

out = {
    "backend": _kernels.BACKEND,
    "roof_20_restarts": timed(lambda: convex_roof_eof(rho, restarts=20, seed=0)),
    "falsify_budget_20": timed(lambda: numeric_falsify(space, budget=20, seed=0)),
    "roof_value": convex_roof_eof(rho, restarts=20, seed=0).value,
}
print(json.dumps(out))
"""


def run(backend: str, repeat: int) -> dict:
    env = dict(os.environ, EBSPACE_BACKEND=backend)
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = [run(b, args.repeat) for b in ("numba", "numpy")]
    print(f"{'backend':<8} {'roof (s)':>10} {'falsify (s)':>12} {'roof value':>20}")
    for r in rows:
        print(f"{r['backend']:<8} {r['roof_20_restarts']:>10.4f} {r['falsify_budget_20']:>12.4f} {r['roof_value']:>20.15f}")
    nb, np_ = rows
    print(f"speedup roof x{np_['roof_20_restarts'] / nb['roof_20_restarts']:.1f}, "
          f"falsify x{np_['falsify_budget_20'] / nb['falsify_budget_20']:.1f}; "
          f"value difference {abs(nb['roof_value'] - np_['roof_value']):.2e}")


if __name__ == "__main__":
    main()
