#!/usr/bin/env python3
"""Smoke test for the diamond_py extension module.

Builds the extension with cargo, loads it, and verifies a handful of
frozen reference values against the library. Run from anywhere:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def build_and_import():
    subprocess.run(
        ["cargo", "build", "-p", "diamond-py"],
        cwd=REPO_ROOT,
        check=True,
    )
    built = REPO_ROOT / "target" / "debug" / "libdiamond_py.so"
    if not built.exists():  # e.g. macOS
        built = REPO_ROOT / "target" / "debug" / "libdiamond_py.dylib"
    staging = Path(tempfile.mkdtemp(prefix="diamond_py_"))
    shutil.copy(built, staging / "diamond_py.so")
    sys.path.insert(0, str(staging))
    import diamond_py

    return diamond_py


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    dp = build_and_import()

    # Symmetric two-relay network at SNR 1: pdf achieves 1 bit, the cutset
    # proxy is log2(3), and the single-antenna MIMO path must agree.
    net = dp.ScalarDiamond([1 + 0j, 1 + 0j], [1 + 0j, 1 + 0j], 1.0)
    assert net.n == 2 and net.snr == 1.0
    approx(net.pdf_rate(), 1.0, 1e-12)
    approx(net.cutset_proxy(), math.log2(3), 1e-12)
    approx(net.nnc_rate(), 0.4150374992788437, 1e-12)
    g1, g2 = net.gap_constants()
    approx(g1, math.log2(3) + 1 + 1, 1e-12)
    approx(g2, 2.0, 1e-12)
    point = net.pdf_rate_point()
    approx(sum(point), net.pdf_rate(), 1e-8)

    # Single relay, unit gains, SNR 1: naive AF forwards at full power and
    # lands exactly on log2(4/3).
    single = dp.ScalarDiamond([1 + 0j], [1 + 0j], 1.0)
    rate, scalings = single.af_rate("naive")
    approx(rate, math.log2(4 / 3), 1e-12)
    assert len(scalings) == 1
    approx(abs(scalings[0]), 1 / math.sqrt(2), 1e-12)
    assert single.best_of() >= rate - 1e-12

    # MIMO reduction: an all-single-antenna network reproduces the scalar
    # rates to machine precision.
    ones = [[[1 + 0j]], [[1 + 0j]]]
    mimo = dp.MimoDiamond(1, 1, ones, ones, 1.0)
    approx(mimo.pdf_rate(), net.pdf_rate(), 1e-12)
    approx(mimo.nnc_rate(), net.nnc_rate(), 1e-12)
    assert mimo.antennas == [1, 1]

    # Waterfilling reference: modes (4, 1), budget 1.
    allocation, level, capacity = dp.waterfill([4.0, 1.0], 1.0)
    approx(level, 1.125, 1e-9)
    approx(allocation[0], 0.875, 1e-9)
    approx(allocation[1], 0.125, 1e-9)
    approx(capacity, 2.339850002884625, 1e-9)
    approx(dp.lemma1_bound(2, 2), 1.1699250014423124, 1e-12)

    # Superposition: all power on the strongest relay is single-user
    # capacity there and silence elsewhere.
    rates = dp.superposition_rates([2.0, 8.0, 0.5], 3.0, [1.0, 0.0, 0.0])
    approx(rates[1], math.log2(25), 1e-12)
    assert rates[0] == 0.0 and rates[2] == 0.0

    # Monte Carlo: deterministic, and the pdf gap respects 2·log2(n).
    stats = dp.run_monte_carlo(n=4, snr=10.0, dist="rayleigh", trials=50, seed=7)
    again = dp.run_monte_carlo(n=4, snr=10.0, dist="rayleigh", trials=50, seed=7)
    assert stats == again
    assert set(stats) == {"pdf", "af_opt", "af_naive", "best_relay", "best_of"}
    assert 0.0 <= stats["pdf"]["max"] <= 2 * math.log2(4) + 1e-9
    assert stats["best_of"]["max"] <= stats["pdf"]["max"] + 1e-12

    # Check suite plumbing.
    passed, detail = dp.check_suite("edmonds", trials=20, n=4, seed=0)
    assert passed, detail

    # Errors surface as Python exceptions.
    try:
        dp.ScalarDiamond([], [], 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("empty network must raise ValueError")
    try:
        net.af_rate("psychic")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown AF mode must raise ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
