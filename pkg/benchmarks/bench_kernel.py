"""Compare the compiled and pure-Python station kernels.

    python3 benchmarks/bench_kernel.py [--repeat N] [--sim-time T]

Both backends are run on identical configurations; the script also checks
that they produce the same report before printing timings.
"""
import argparse
import time
from dataclasses import replace

from hexmob import SimConfig, run
from hexmob.kernel import available_backends


def time_backend(cfg, backend, repeat):
    best = float("inf")
    report = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        report = run(cfg, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sim-time", type=float, default=30000.0)
    ap.add_argument("--stations", type=int, default=10)
    args = ap.parse_args()

    backends = available_backends()
    cases = [("speed 1", 1.0), ("speed 8", 8.0)]
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':<10}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, speed in cases:
        cfg = replace(SimConfig(), stations=args.stations, sim_time=args.sim_time, max_speed=speed)
        times, reports = {}, {}
        for b in backends:
            times[b], reports[b] = time_backend(cfg, b, args.repeat)
        if len(backends) > 1 and reports["c"].summary() != reports["python"].summary():
            raise SystemExit(f"{label}: backends disagree")
        speedup = times["python"] / times["c"] if len(backends) > 1 else float("nan")
        print(f"{label:<10}" + "".join(f"{times[b]:>11.4f}s" for b in backends) + f"{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
