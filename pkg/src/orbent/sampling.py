"""Seedable random generators for verification and property testing.

Everything takes an explicit :class:`numpy.random.Generator`, so acceptance
runs are reproducible from a printed seed.
"""

from __future__ import annotations

import numpy as np

from . import fock, ssr
from .fock import DOUBLE_A, DOUBLE_B, FULL, TRIPLET_DOWN, TRIPLET_UP, VACUUM, TwoOrbitalState

__all__ = [
    "random_weights",
    "random_state",
    "random_symmetric_state",
    "random_separable_symmetric_state",
    "random_singlet_vector",
]

_SPIN = (fock.SINGLET, fock.TRIPLET_ZERO, TRIPLET_UP, TRIPLET_DOWN)
_PAIR = (VACUUM, DOUBLE_A, DOUBLE_B, FULL)


def random_weights(rng: np.random.Generator, variant: str = "general",
                   full_rank_floor: float = 1e-6) -> np.ndarray:
    """Random sector-weight vector for one closed-formula variant.

    ``singlet`` balances the two polarized triplet weights; ``general`` and
    ``parity-general`` resample until the constrained sectors are full rank;
    ``parity-symmetric`` additionally balances the vacuum/full pair.
    """
    if variant not in ("singlet", "general", "parity-general", "parity-symmetric"):
        raise ValueError(f"unknown spectrum variant {variant!r}")
    for _ in range(1000):
        p = rng.dirichlet(np.ones(fock.DIM))
        if variant == "singlet":
            balance = (p[TRIPLET_UP] + p[TRIPLET_DOWN]) / 2.0
            p[TRIPLET_UP] = p[TRIPLET_DOWN] = balance
            p /= p.sum()
            return p
        if variant == "parity-symmetric":
            for pair in ((TRIPLET_UP, TRIPLET_DOWN), (VACUUM, FULL)):
                balance = (p[pair[0]] + p[pair[1]]) / 2.0
                p[pair[0]] = p[pair[1]] = balance
            p /= p.sum()
            return p
        needed = _SPIN if variant == "general" else _SPIN + _PAIR
        if min(p[list(needed)]) >= full_rank_floor:
            return p
    raise RuntimeError("failed to draw a full-rank spectrum")


def random_state(rng: np.random.Generator) -> TwoOrbitalState:
    """Full-rank random density matrix (Ginibre ensemble)."""
    g = rng.normal(size=(fock.DIM, fock.DIM)) + 1j * rng.normal(size=(fock.DIM, fock.DIM))
    m = g @ g.conj().T
    return TwoOrbitalState(m / np.trace(m).real)


def random_symmetric_state(rng: np.random.Generator,
                           generators: tuple[str, ...] = ("number", "sz"),
                           reflect: bool = False) -> TwoOrbitalState:
    """Random state pinched onto the symmetric sectors of the given generators."""
    state = random_state(rng)
    for generator in generators:
        state = ssr.twirl(state, generator)
    if reflect:
        r = fock.reflection_operator()
        state = TwoOrbitalState((state.matrix + r @ state.matrix @ r.T) / 2.0)
    return state


def _random_local_number_state(rng: np.random.Generator) -> np.ndarray:
    """Random 4x4 orbital state block-diagonal in the local particle number."""
    weights = rng.dirichlet(np.ones(3))  # sectors N = 0, 1, 2
    block = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    block = block @ block.conj().T
    block *= weights[1] / np.trace(block).real
    out = np.zeros((4, 4), dtype=complex)
    out[0, 0] = weights[0]
    out[1:3, 1:3] = block
    out[3, 3] = weights[2]
    return out


def random_separable_symmetric_state(rng: np.random.Generator,
                                     n_terms: int = 6) -> TwoOrbitalState:
    """Random separable state with local-number and magnetization symmetry.

    Built as an explicit convex mixture of products of local-number-symmetric
    orbital states, then symmetrized by the magnetization and local-number
    twirls (both are mixtures of local unitaries, so separability is kept).
    The singlet/triplet coherence generically survives, with a complex part.
    """
    mix = np.zeros((fock.DIM, fock.DIM), dtype=complex)
    weights = rng.dirichlet(np.ones(n_terms))
    for w in weights:
        mix += w * np.kron(_random_local_number_state(rng), _random_local_number_state(rng))
    state = TwoOrbitalState(mix)
    state = ssr.twirl(state, "sz")
    return ssr.nssr_project(state)


def random_singlet_vector(rng: np.random.Generator, n_orbitals: int = 3) -> np.ndarray:
    """Random pure state with total spin zero and zero magnetization."""
    s2 = fock.total_spin_operator(n_orbitals)
    sz = fock.sz_operator(n_orbitals)
    eigenvalues, vectors = np.linalg.eigh(s2 + sz @ sz)
    kernel = vectors[:, eigenvalues < 1e-9]
    if kernel.shape[1] == 0:
        raise ValueError("no singlet subspace found")
    coeffs = rng.normal(size=kernel.shape[1]) + 1j * rng.normal(size=kernel.shape[1])
    psi = kernel @ coeffs
    return psi / np.linalg.norm(psi)
