#!/usr/bin/env python3
"""Benchmark the compiled correlation kernel against the numpy fallback.

Times the pairwise lag-search normalized cross-correlation (the hot loop
of the injection detector) and the full detect_injection call on a
realistic 4-channel, 1-second, 48 kHz recording.

Run from the repository root after building the extension:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernels.py
"""

import sys
import time

import numpy as np

from photoninject import defense
from photoninject._kernels import BACKEND, ncc_np

try:
    from photoninject._kernels import ncc_cy
except ImportError:
    ncc_cy = None


def make_frames(n_ch=4, seconds=1.0, sample_rate=48000, frame=1024, seed=0):
    rng = np.random.default_rng(seed)
    n = int(seconds * sample_rate)
    channels = rng.normal(0, 0.005, (n_ch, n))
    t = np.arange(n) / sample_rate
    channels[0] += 0.2 * np.sin(2 * np.pi * 440 * t)
    n_frames = n // frame
    framed = channels[:, :n_frames * frame].reshape(n_ch, n_frames, frame)
    framed = framed - framed.mean(axis=2, keepdims=True)
    return np.ascontiguousarray(framed), round(sample_rate * defense.LAG_WINDOW_S)


def bench(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    frames, max_lag = make_frames()
    print(f"frames: {frames.shape}, lag window: +/-{max_lag} samples")

    t_np = bench(ncc_np.pairwise_max_ncc, frames, max_lag)
    print(f"numpy fallback kernel:   {t_np * 1e3:8.2f} ms")

    if ncc_cy is None:
        print("compiled kernel: not built (run `python setup.py build_ext "
              "--inplace`)")
        return 1

    t_cy = bench(ncc_cy.pairwise_max_ncc, frames, max_lag)
    print(f"compiled kernel:         {t_cy * 1e3:8.2f} ms   "
          f"({t_np / t_cy:.2f}x vs numpy)")

    a = ncc_np.pairwise_max_ncc(frames, max_lag)
    b = ncc_cy.pairwise_max_ncc(frames, max_lag)
    drift = float(np.max(np.abs(a - b)))
    print(f"backend agreement:       max |diff| = {drift:.3e}")

    rng = np.random.default_rng(1)
    channels = rng.normal(0, 0.005, (4, 48000))
    cs = defense.ChannelSet(channels, 48000)
    t_detect = bench(defense.detect_injection, cs)
    print(f"detect_injection ({BACKEND} backend): {t_detect * 1e3:8.2f} ms")
    return 0 if drift < 1e-9 else 1


if __name__ == "__main__":
    sys.exit(main())
