"""Compare the compiled and pure-Python flow kernels.

    python benchmarks/bench_flow.py [--specs 20] [--starts 10] [--repeat 3]

Workload: the monotonicity batch (random perturbed saddles, orbits run to
the box boundary) plus a long saddle-node orbit. Both kernels get identical
inputs; outputs are checked to agree before timings are reported.
"""
import argparse
import math
import random
import time

from folsing import _flowcore_py
from folsing.local_flow import KINDS, random_saddle_spec, random_start

try:
    from folsing import _flowcore
except ImportError:
    _flowcore = None


def workload(n_specs, n_starts, seed=0):
    rng = random.Random(seed)
    jobs = []
    for _ in range(n_specs):
        spec = random_saddle_spec(rng)
        for _ in range(n_starts):
            x0, y0 = random_start(rng, spec.box_a)
            jobs.append((KINDS[spec.kind], spec.lam1, spec.lam2, *spec._arrays(),
                         x0, y0, 0.0, 100.0, 1e-10, 1e-14, spec.box_a, spec.box_b, 0.0, 1_000_000))
    jobs.append((2, 0, 0, [], [], [], [], -0.2, 1e-8, 0.0, 100.0, 1e-10, 1e-14, 1.0, 0.5, 0.0, 1_000_000))
    return jobs


def run(mod, jobs):
    return [mod.integrate(*job) for job in jobs]


def best_of(mod, jobs, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = run(mod, jobs)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--specs", type=int, default=20)
    ap.add_argument("--starts", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jobs = workload(args.specs, args.starts)
    steps = None
    t_py, out_py = best_of(_flowcore_py, jobs, args.repeat)
    steps = sum(len(o[0]) for o in out_py)
    print(f"orbits: {len(jobs)}, accepted steps: {steps}")
    print(f"python  {t_py * 1e3:9.1f} ms")
    if _flowcore is None:
        print("cython  (extension not built)")
        return
    t_cy, out_cy = best_of(_flowcore, jobs, args.repeat)
    worst = max(
        abs(a - b)
        for oc, op in zip(out_cy, out_py)
        for a, b in zip(oc[1] + oc[2], op[1] + op[2])
    )
    assert all(oc[3] == op[3] and len(oc[0]) == len(op[0]) for oc, op in zip(out_cy, out_py))
    print(f"cython  {t_cy * 1e3:9.1f} ms   speedup x{t_py / t_cy:.1f}   max |difference| {worst:.1e}")


if __name__ == "__main__":
    main()
