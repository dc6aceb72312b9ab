import pytest

from oscphase import (
    OscParams,
    build_basis,
    build_phase_operators,
    build_spherical,
    cartesian_operators,
)

N_MAX = 6


@pytest.fixture(scope="session")
def params():
    return OscParams()


@pytest.fixture(scope="session")
def basis6():
    return build_basis(N_MAX)


@pytest.fixture(scope="session")
def ops6(basis6, params):
    return cartesian_operators(basis6, params)


@pytest.fixture(scope="session")
def sph6(basis6, params, ops6):
    return build_spherical(basis6, params, ops6)


@pytest.fixture(scope="session")
def pset6_open(sph6, params, ops6):
    return build_phase_operators(sph6, params, "open", ops6)


@pytest.fixture(scope="session")
def pset6_cyclic(sph6, params, ops6):
    return build_phase_operators(sph6, params, "cyclic", ops6)
