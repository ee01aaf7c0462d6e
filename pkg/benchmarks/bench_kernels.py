"""Time the pairwise log-energy kernel on each available backend.

    python3 benchmarks/bench_kernels.py [--sizes 958,4000,16000] [--repeat 3]
"""

import argparse
import time

from diamond import kernels
from diamond.ensemble import layout_from_profile, sample
from diamond.profile import builtin_quasioptimal, total_points


def sphere_points(n_target: int):
    m = 1
    while total_points(builtin_quasioptimal(m + 1)) <= n_target:
        m += 1
    return sample(layout_from_profile(builtin_quasioptimal(m)), seed=0).points


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", default="958,4000,16000")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    names = sorted(kernels.BACKENDS)
    print(f"{'N':>8} " + " ".join(f"{n + ' [s]':>14}" for n in names) + f" {'speedup':>9} {'agree':>6}")
    for size in (int(s) for s in args.sizes.split(",")):
        pts = sphere_points(size)
        times, values = {}, {}
        for name in names:
            values[name] = kernels.pair_sum(pts, threads=args.threads, backend=name)
            times[name] = best_time(lambda: kernels.pair_sum(pts, threads=args.threads, backend=name), args.repeat)
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        agree = len(set(values.values())) == 1
        print(f"{len(pts):>8} " + " ".join(f"{times[n]:>14.4f}" for n in names) + f" {speed:>9.1f} {str(agree):>6}")


if __name__ == "__main__":
    main()
