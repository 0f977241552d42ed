"""Compare the compiled and numpy kernels on density enumeration and full runs.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time
from dataclasses import replace

import numpy as np

from qmaxsat import kernels
from qmaxsat.analysis import required_dummies
from qmaxsat.formula import generate_random
from qmaxsat.oracle import density_profile
from qmaxsat.simulator import RunConfig, run_trials


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    big = generate_random(16, 60, 7)
    yield "densities n=16 m=60", lambda k: k.clause_densities(big.n, *big.clause_arrays())
    # fixed r and a bounded restart budget keep the work per run predictable
    for n, m in ((8, 24), (12, 40), (14, 50)):
        f = generate_random(n, m, n * 100 + m)
        prof = density_profile(f)
        cfg = RunConfig(mu=required_dummies(m).mu_required, r=200, max_restarts=20, seed=1)
        yield (f"runs n={n} m={m} r=200 x10",
               lambda k, f=f, prof=prof, cfg=cfg: [r.to_dict(False) | {"backend": None}
                                                  for r in run_trials(f, replace(cfg, backend=k), 10, 1, prof)])

def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = sorted(kernels.BACKENDS)
    print(f"backends: {', '.join(names)} (active: {kernels.BACKEND})")
    print(f"{'workload':<26}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}  same")
    for label, work in workloads():
        times, outs = {}, {}
        for name in names:
            arg = kernels.get(name) if label.startswith("densities") else name
            times[name], outs[name] = best_of(lambda: work(arg), args.repeat)
        row = f"{label:<26}" + "".join(f"{times[n]:>11.4f}s" for n in names)
        if "cython" in times:
            a, b = outs["python"], outs["cython"]
            same = np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
            row += f"{times['python'] / times['cython']:>9.1f}x  {same}"
        print(row)


if __name__ == "__main__":
    main()
