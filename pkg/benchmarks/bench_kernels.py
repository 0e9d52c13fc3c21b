"""Compare the compiled and numpy membrane kernels.

    python benchmarks/bench_kernels.py [--n 2000]

Times ``simulate_grid`` (single-spike run) and ``voltage_grid`` (full trace)
on random bin-encoded frames, and a short training run under each backend.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from tempovad import _kernels_py
from tempovad.encoder import encode_frame
from tempovad.neuron import NeuronParams

try:
    from tempovad import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

TRAIN_SNIPPET = """
import time, numpy as np
from tempovad import BACKEND
from tempovad.features import FrameSet
from tempovad.trainer import TrainConfig, train
rng = np.random.default_rng(0)
y = np.array(["V", "N"] * 100)
X = np.clip(np.where(y == "V", 0.7, 0.3)[:, None] + rng.normal(0, 0.08, (200, 128)), 0, 1)
t = time.perf_counter()
train(FrameSet(X, y), TrainConfig(groups=5, group_size=200))
print(BACKEND, time.perf_counter() - t)
"""


def bench(fn, cases, threshold=None):
    start = time.perf_counter()
    for times, w in cases:
        args = (times, w, 1601, 0.1, 15.0, 3.75, NeuronParams().v0, 0.0, -1.5)
        fn(*args) if threshold is None else fn(*args, threshold)
    return (time.perf_counter() - start) / len(cases)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2000)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    cases = []
    for _ in range(args.n):
        pat = encode_frame(rng.uniform(size=128))
        w = rng.uniform(-0.2, 0.2, 1280)
        cases.append((np.ascontiguousarray(pat.times), np.ascontiguousarray(w[pat.neuron_ids])))

    backends = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    print(f"{'kernel':<16}{'backend':<10}{'us/call':>10}")
    results = {}
    for name, mod in backends:
        results[("simulate", name)] = bench(mod.simulate_grid, cases, 1.0)
        results[("voltage", name)] = bench(mod.voltage_grid, cases)
    for (kernel, name), sec in results.items():
        print(f"{kernel + '_grid':<16}{name:<10}{sec * 1e6:>10.1f}")
    if _kernels_c:
        for kernel in ("simulate", "voltage"):
            print(f"speedup {kernel}_grid: {results[(kernel, 'python')] / results[(kernel, 'cython')]:.1f}x")

    print("\ntraining 5 groups x 200 samples:")
    for pure in ("1", "0"):
        env = dict(os.environ, TEMPOVAD_PURE=pure)
        out = subprocess.run([sys.executable, "-c", TRAIN_SNIPPET], env=env, capture_output=True, text=True)
        name, sec = out.stdout.split()
        print(f"  {name:<8}{float(sec):8.2f} s")


if __name__ == "__main__":
    main()
