"""Benchmark the trajectory sweep: numba kernel vs numpy fallback.

Builds the doubled-space phase exponential at the requested truncation,
sweeps a dense time grid with both backends, and reports wall times.
Run as:  python3 benchmarks/bench_trajectory.py --n-max 10 --steps 20000
"""

import argparse
import time

import numpy as np

from oscphase import (
    OscParams,
    build_basis,
    build_phase_operators,
    build_spherical,
    cartesian_operators,
)
from oscphase.evolution import energies as doubled_energies
from oscphase.kernels import HAS_NUMBA, trajectory_expectations


def build_problem(n_max):
    params = OscParams()
    basis = build_basis(n_max)
    ops = cartesian_operators(basis, params)
    sph = build_spherical(basis, params, ops)
    pset = build_phase_operators(sph, params, "open", ops)
    d = pset.doubled
    rng = np.random.default_rng(42)
    amps = np.zeros(d.dim, dtype=np.complex128)
    keep = d.shells[: d.dim_single] <= n_max - 2
    amps[: d.dim_single][keep] = rng.normal(size=int(keep.sum())) + 1j * rng.normal(
        size=int(keep.sum())
    )
    amps /= np.linalg.norm(amps)
    return doubled_energies(d, params), amps, pset.exp_plus.matrix


def timed(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    e, amps, op = build_problem(args.n_max)
    times = np.linspace(0.0, 50.0, args.steps)
    print(f"n_max={args.n_max} dim={amps.size} nnz={op.nnz} steps={args.steps}")

    ref = trajectory_expectations(e, amps, op, times, jit=False)
    t_numpy = timed(lambda: trajectory_expectations(e, amps, op, times, jit=False), args.repeats)
    print(f"numpy fallback : {t_numpy * 1e3:9.2f} ms")

    if HAS_NUMBA:
        trajectory_expectations(e, amps, op, times[:8], jit=True)  # compile warmup
        got = trajectory_expectations(e, amps, op, times, jit=True)
        assert np.abs(got - ref).max() < 1e-11, "backends disagree"
        t_jit = timed(lambda: trajectory_expectations(e, amps, op, times, jit=True), args.repeats)
        print(f"numba kernel   : {t_jit * 1e3:9.2f} ms")
        print(f"speedup        : {t_numpy / t_jit:9.2f} x")
    else:
        print("numba unavailable; only the fallback was timed")


if __name__ == "__main__":
    main()
