import numpy as np
import pytest

from oscphase import (
    Chain1D,
    NumberBasis1D,
    commutator,
    doubled_shift_1d,
    edge_projectors,
    hamiltonian_1d,
    identity,
    number_shift_pair,
    op_norm_1,
)


@pytest.fixture(scope="module")
def nb():
    return NumberBasis1D(6)


def test_shift_lowers_by_one(nb):
    down, up = number_shift_pair(nb)
    vec = np.zeros(nb.dim)
    vec[2] = 1.0
    out = down @ vec
    expect = np.zeros(nb.dim)
    expect[1] = 1.0
    assert np.abs(out - expect).max() < 1e-15
    assert np.abs(down @ np.eye(nb.dim)[:, 0]).max() == 0.0  # kills the vacuum


def test_shift_isometry_defect(nb):
    down, up = number_shift_pair(nb)
    ident = identity(nb)
    left = (down @ up - ident).toarray()
    assert np.abs(left[: nb.dim - 1, : nb.dim - 1]).max() < 1e-15
    right = (up @ down - ident).toarray()
    expect = np.zeros((nb.dim, nb.dim))
    expect[0, 0] = -1.0  # the vacuum defect
    assert np.abs(right - expect).max() < 1e-15


def test_chain_positions():
    chain = Chain1D(3, "open")
    assert chain.dim == 8
    assert chain.position_of(3, -1) == 0  # leftmost
    assert chain.position_of(0, -1) == 3
    assert chain.position_of(0, +1) == 4
    assert chain.position_of(3, +1) == 7  # rightmost
    assert chain.ends == (0, 7)
    assert list(chain.shells) == [3, 2, 1, 0, 0, 1, 2, 3]


def test_doubled_shift_walks_left():
    chain = Chain1D(3, "open")
    shift = doubled_shift_1d(chain).toarray()
    vec = np.zeros(chain.dim)
    vec[chain.position_of(0, +1)] = 1.0
    out = shift @ vec
    assert out[chain.position_of(0, -1)] == 1.0  # the vacuum link
    vec = np.zeros(chain.dim)
    vec[chain.position_of(1, -1)] = 1.0
    out = shift @ vec
    assert out[chain.position_of(2, -1)] == 1.0  # deeper into the minus copy
    # open end: the leftmost state is annihilated
    assert np.abs(shift[:, 0]).max() == 0.0


def test_open_defect_on_edges_only():
    chain = Chain1D(4, "open")
    shift = doubled_shift_1d(chain)
    ident = identity(chain)
    p_left, p_right = edge_projectors(chain)
    assert op_norm_1(shift.adjoint() @ shift - ident + p_left) == 0.0
    assert op_norm_1(shift @ shift.adjoint() - ident + p_right) == 0.0


def test_cyclic_shift_is_permutation():
    chain = Chain1D(4, "cyclic")
    dense = doubled_shift_1d(chain).toarray()
    assert set(np.unique(dense)) <= {0.0, 1.0}
    assert np.all(dense.sum(axis=0) == 1.0)
    assert np.all(dense.sum(axis=1) == 1.0)


def test_cyclic_smallest_chain_has_period_dim():
    # n_max = 1 gives a 4-cycle: E^4 = 1 and no smaller power works
    chain = Chain1D(1, "cyclic")
    e = doubled_shift_1d(chain).toarray()
    acc = np.eye(chain.dim)
    for k in range(1, 4):
        acc = e @ acc
        assert np.abs(acc - np.eye(chain.dim)).max() == 1.0
    assert np.abs(e @ acc - np.eye(chain.dim)).max() == 0.0


def test_commutator_law_on_plus_copy():
    for mode in ("open", "cyclic"):
        chain = Chain1D(5, mode)
        shift = doubled_shift_1d(chain)
        h = hamiltonian_1d(chain, omega=1.3)
        lhs = commutator(h, shift) + 1.3 * shift
        dense = lhs.toarray()
        plus = [chain.position_of(n, +1) for n in range(chain.n_max + 1)]
        assert np.abs(dense[np.ix_(plus, plus)]).max() < 1e-13


def test_mode_validation():
    with pytest.raises(ValueError):
        Chain1D(2, "weird")
    with pytest.raises(ValueError):
        Chain1D(-1, "open")
