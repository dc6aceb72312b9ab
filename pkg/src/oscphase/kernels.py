"""Hot numeric kernels for trajectory sweeps.

The only genuinely hot loop in the package is the per-time-step
expectation <psi(t)| A |psi(t)> with psi(t) = exp(-i E t) * psi(0) and A
sparse. The loop kernel is compiled with numba when available; setting
the environment variable OSCPHASE_JIT=0 forces the vectorized
numpy/scipy fallback. Both paths compute the same quantity and differ
only in summation order, i.e. at roundoff level.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAS_NUMBA = False


def jit_enabled() -> bool:
    return HAS_NUMBA and os.environ.get("OSCPHASE_JIT", "1") != "0"


def backend_name() -> str:
    return "numba" if jit_enabled() else "numpy"


def _sweep(energies, amps0, data, indices, indptr, times):
    npts = times.shape[0]
    dim = amps0.shape[0]
    out = np.empty(npts, dtype=np.complex128)
    psi = np.empty(dim, dtype=np.complex128)
    for k in range(npts):
        t = times[k]
        for i in range(dim):
            psi[i] = amps0[i] * np.exp(-1j * energies[i] * t)
        acc = 0.0 + 0.0j
        for i in range(dim):
            row = 0.0 + 0.0j
            for p in range(indptr[i], indptr[i + 1]):
                row += data[p] * psi[indices[p]]
            acc += np.conj(psi[i]) * row
        out[k] = acc
    return out


if HAS_NUMBA:
    _sweep_jit = numba.njit(cache=True)(_sweep)


def _sweep_numpy(energies, amps0, op_csr, times, block: int = 256):
    out = np.empty(times.shape[0], dtype=np.complex128)
    for k0 in range(0, times.shape[0], block):
        ts = times[k0 : k0 + block]
        psi = amps0[None, :] * np.exp(-1j * np.outer(ts, energies))
        y = op_csr @ psi.T
        out[k0 : k0 + ts.shape[0]] = np.sum(psi.conj() * y.T, axis=1)
    return out


def trajectory_expectations(energies, amps0, op_csr, times, jit: bool | None = None):
    """<psi(t)| A |psi(t)> for each t, with psi(t) = exp(-i*energies*t)*amps0.

    op_csr is a scipy CSR matrix. jit=None consults OSCPHASE_JIT, jit
    True/False forces a backend (True requires numba).
    """
    energies = np.ascontiguousarray(energies, dtype=np.float64)
    amps0 = np.ascontiguousarray(amps0, dtype=np.complex128)
    times = np.ascontiguousarray(times, dtype=np.float64)
    if jit is None:
        jit = jit_enabled()
    if jit:
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _sweep_jit(
            energies,
            amps0,
            np.ascontiguousarray(op_csr.data, dtype=np.complex128),
            op_csr.indices,
            op_csr.indptr,
            times,
        )
    return _sweep_numpy(energies, amps0, op_csr, times)
