"""Time the recurrent kernels on every available backend.

Runs layer_forward and layer_backward over identical random inputs, prints
median wall time per call, and reports the compiled backend's speedup over
the numpy fallback when both are importable.

Usage::

    python benchmarks/bench_kernels.py [--steps 30] [--batch 64]
                                       [--input 7] [--hidden 50]
                                       [--repeats 20]
"""

import argparse
import statistics
import time

import numpy as np

from loadcast.lstm.backend import available_backends


def _median_ms(fn, args, repeats, warmup):
    for _ in range(warmup):
        fn(*args)
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        samples.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(samples)


def build_case(steps, batch, input_size, hidden, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(steps, batch, input_size))
    shape = (hidden, hidden + input_size)
    weights = [rng.normal(size=shape) * 0.1 for _ in range(4)]
    biases = [rng.normal(size=hidden) * 0.1 for _ in range(4)]
    return x, weights, biases


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=30)
    parser.add_argument("--batch", type=int, default=64)
    parser.add_argument("--input", type=int, default=7, dest="input_size")
    parser.add_argument("--hidden", type=int, default=50)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--warmup", type=int, default=3)
    args = parser.parse_args(argv)

    x, weights, biases = build_case(args.steps, args.batch, args.input_size,
                                    args.hidden)
    rng = np.random.default_rng(1)
    dh = rng.normal(size=(args.steps, args.batch, args.hidden))

    backends = available_backends()
    print(f"case: T={args.steps} B={args.batch} D={args.input_size} "
          f"H={args.hidden}, median of {args.repeats} runs")
    print(f"{'backend':<10}{'forward ms':>12}{'backward ms':>13}{'total ms':>11}")

    totals = {}
    reference = None
    for name in sorted(backends):
        kernels = backends[name]
        fwd_out = kernels.layer_forward(x, *weights, *biases)
        bwd_args = (dh, x, *fwd_out, *weights)
        fwd_ms = _median_ms(kernels.layer_forward, (x, *weights, *biases),
                            args.repeats, args.warmup)
        bwd_ms = _median_ms(kernels.layer_backward, bwd_args,
                            args.repeats, args.warmup)
        totals[name] = fwd_ms + bwd_ms
        print(f"{name:<10}{fwd_ms:>12.3f}{bwd_ms:>13.3f}{totals[name]:>11.3f}")

        if reference is None:
            reference = fwd_out
        else:
            drift = max(float(np.max(np.abs(a - b)))
                        for a, b in zip(reference, fwd_out))
            print(f"{'':10}max forward difference vs first backend: {drift:.2e}")

    if {"python", "cython"} <= totals.keys():
        print(f"cython speedup over python: "
              f"{totals['python'] / totals['cython']:.2f}x")
    elif "cython" not in totals:
        print("compiled backend not importable; numpy fallback only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
