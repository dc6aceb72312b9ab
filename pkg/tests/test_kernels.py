import numpy as np
import pytest
from scipy import sparse

from oscphase import kernels
from oscphase.kernels import backend_name, jit_enabled, trajectory_expectations


def random_problem(dim=40, n_times=37, seed=7):
    rng = np.random.default_rng(seed)
    e = rng.uniform(0.5, 9.0, dim)
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    amps /= np.linalg.norm(amps)
    dense = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    dense[rng.random((dim, dim)) < 0.8] = 0.0
    op = sparse.csr_matrix(dense)
    times = np.linspace(0.0, 5.0, n_times)
    return e, amps, op, times


def reference_sweep(e, amps, op, times):
    out = np.empty(times.size, dtype=np.complex128)
    for k, t in enumerate(times):
        psi = amps * np.exp(-1j * e * t)
        out[k] = np.vdot(psi, op @ psi)
    return out


def test_numpy_backend_matches_reference():
    e, amps, op, times = random_problem()
    got = trajectory_expectations(e, amps, op, times, jit=False)
    want = reference_sweep(e, amps, op, times)
    assert np.abs(got - want).max() < 1e-12


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba not installed")
def test_jit_backend_matches_numpy():
    e, amps, op, times = random_problem(dim=60, n_times=50, seed=11)
    a = trajectory_expectations(e, amps, op, times, jit=False)
    b = trajectory_expectations(e, amps, op, times, jit=True)
    assert np.abs(a - b).max() < 1e-12


def test_env_flag_disables_jit(monkeypatch):
    monkeypatch.setenv("OSCPHASE_JIT", "0")
    assert not jit_enabled()
    assert backend_name() == "numpy"
    e, amps, op, times = random_problem(dim=10, n_times=5)
    got = trajectory_expectations(e, amps, op, times)  # dispatches to numpy
    assert np.abs(got - reference_sweep(e, amps, op, times)).max() < 1e-12


def test_explicit_jit_without_numba_raises(monkeypatch):
    monkeypatch.setattr(kernels, "HAS_NUMBA", False)
    e, amps, op, times = random_problem(dim=10, n_times=5)
    with pytest.raises(RuntimeError):
        trajectory_expectations(e, amps, op, times, jit=True)


def test_blocked_numpy_handles_odd_sizes():
    # exercise the block boundary in the vectorized fallback
    e, amps, op, times = random_problem(dim=12, n_times=301, seed=3)
    got = trajectory_expectations(e, amps, op, times, jit=False)
    assert np.abs(got - reference_sweep(e, amps, op, times)).max() < 1e-12
