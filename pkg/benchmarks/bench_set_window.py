"""Time one Set-mode window with direct vs FFT correlation.

    python3 benchmarks/bench_set_window.py [--win-len 4096] [--max-lag 256]
"""

import argparse
import timeit

import numpy as np

from cyclocorr.estimator import compute_set_window


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--win-len", type=int, default=4096)
    ap.add_argument("--max-lag", type=int, nargs="+", default=[8, 64, 256, 1024])
    ap.add_argument("--alphas", type=int, default=4, help="number of cycle frequencies")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n = args.win_len
    alphas = np.linspace(-0.4, 0.4, args.alphas)
    print(f"N={n}, {args.alphas} cycle frequencies; best of {args.repeat}, ms per window")
    print(f"{'M':>6} {'direct':>10} {'fft':>10} {'auto':>10} {'max |diff|':>12}")
    for m in args.max_lag:
        xw = rng.standard_normal(n + 2 * m) + 1j * rng.standard_normal(n + 2 * m)
        yw = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        times, outs = {}, {}
        for method in ("direct", "fft", "auto"):
            def call(method=method):
                return compute_set_window(xw, yw, alphas, m, False, method=method)
            outs[method] = call()
            loops = 3
            times[method] = min(timeit.repeat(call, number=loops, repeat=args.repeat)) / loops
        diff = np.max(np.abs(outs["direct"] - outs["fft"]))
        print(f"{m:>6} {1e3 * times['direct']:>10.3f} {1e3 * times['fft']:>10.3f} "
              f"{1e3 * times['auto']:>10.3f} {diff:>12.2e}")


if __name__ == "__main__":
    main()
