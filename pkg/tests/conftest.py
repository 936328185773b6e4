import numpy as np
import pytest

from orbent import fock


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def number_basis():
    return fock.build_symmetry_basis("number")


@pytest.fixture(scope="session")
def parity_basis():
    return fock.build_symmetry_basis("parity")


def state_from_weights(weights, variant="number"):
    """Density matrix diagonal in a symmetry eigenbasis."""
    basis = fock.build_symmetry_basis(variant)
    v = basis.vectors
    return fock.TwoOrbitalState((v * np.asarray(weights)) @ v.conj().T)
