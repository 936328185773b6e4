"""Site-site entanglement in free-electron chains.

The ground state of the nearest-neighbor hopping chain is a Fermi sea; all
two-site physics follows from the per-spin correlator.  In the thermodynamic
limit at per-spin filling ``eta`` the correlator is ``sin(pi eta l)/(pi l)``,
and the two-site reduced density matrix is Gaussian, built here
constructively from Bernoulli-occupied eigenmodes (the element-by-element
Wick route is reserved for the oracle module).
"""

from __future__ import annotations

import math

import numpy as np

from . import fock
from .entanglement import orbital_entanglement
from .errors import NotDisentangledWithinCapError
from .fock import TwoOrbitalState

__all__ = [
    "correlation",
    "correlation_block",
    "pair_correlation_modes",
    "gaussian_pair_state",
    "two_site_rdm",
    "entanglement_vs_distance",
    "disentanglement_margin",
    "disentangling_distance",
    "lmin_leading_order",
    "finite_chain_correlation_matrix",
    "finite_chain_correlation",
]

# index bookkeeping between the product basis and the two spin species
_OCC = fock.occupation_table(2)
_IDX_UP = 2 * _OCC[:, 0] + _OCC[:, 2]      # (n_A-up, n_B-up) as 2-bit code
_IDX_DN = 2 * _OCC[:, 1] + _OCC[:, 3]
# reordering (A-up, B-up, A-down, B-down) -> (A-up, A-down, B-up, B-down)
# crosses the (A-down, B-up) pair once
_SPECIES_SIGN = (-1.0) ** (_OCC[:, 1] * _OCC[:, 2])


def _check_filling(eta: float) -> None:
    if not 0.0 < eta < 1.0:
        raise ValueError("filling fraction must lie strictly between 0 and 1")


def correlation(eta: float, distance: int) -> float:
    """Thermodynamic-limit correlator ``<f+_i f_j>`` of the Fermi sea.

    ``eta`` is the per-spin filling; the value is ``eta`` at distance zero and
    ``sin(pi eta l) / (pi l)`` for ``l >= 1`` (momentum integral over the
    filled sea, cross-checked against long finite chains in the tests).
    """
    _check_filling(eta)
    if distance < 0:
        raise ValueError("distance must be a nonnegative integer")
    if distance == 0:
        return eta
    return math.sin(math.pi * eta * distance) / (math.pi * distance)


def correlation_block(eta: float, distance: int) -> np.ndarray:
    """Per-spin 2x2 correlation block of two sites at the given distance."""
    c = correlation(eta, distance)
    return np.array([[eta, c], [c, eta]])


def pair_correlation_modes(c_up: np.ndarray, c_dn: np.ndarray | None = None) -> np.ndarray:
    """Assemble the 4-mode correlation matrix in global mode order."""
    c_up = np.asarray(c_up, dtype=float)
    c_dn = c_up if c_dn is None else np.asarray(c_dn, dtype=float)
    full = np.zeros((4, 4))
    full[np.ix_((0, 2), (0, 2))] = c_up
    full[np.ix_((1, 3), (1, 3))] = c_dn
    return full


def _species_matrix(block: np.ndarray) -> np.ndarray:
    """4x4 one-species Gaussian state from a 2x2 correlation block.

    Diagonalizes the block, fills each eigenmode as an independent Bernoulli
    mode and rotates back to the site basis; state index is ``2 n_A + n_B``.
    """
    block = np.asarray(block)
    if block.shape != (2, 2) or np.abs(block - block.conj().T).max() > 1e-10:
        raise ValueError("correlation block must be 2x2 Hermitian")
    lam, vec = np.linalg.eigh(block)
    if lam.min() < -1e-10 or lam.max() > 1.0 + 1e-10:
        raise ValueError("correlation eigenvalues must lie in [0, 1]")
    lam = np.clip(lam, 0.0, 1.0)

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = (1.0 - lam[0]) * (1.0 - lam[1])
    rho[3, 3] = lam[0] * lam[1]  # doubly occupied amplitude, |det V| = 1
    for k in range(2):
        weight = lam[k] * (1.0 - lam[1 - k])
        phi = np.array([0.0, vec[1, k], vec[0, k], 0.0], dtype=complex)
        rho += weight * np.outer(phi, phi.conj())
    return rho


def gaussian_pair_state(c_up: np.ndarray, c_dn: np.ndarray | None = None) -> TwoOrbitalState:
    """Two-orbital Gaussian state from per-spin 2x2 correlation blocks.

    The two species tensor together; reordering their modes into the global
    interleaved order contributes the fermionic cross sign.
    """
    rho_up = _species_matrix(c_up)
    rho_dn = _species_matrix(c_up if c_dn is None else c_dn)
    cross = np.outer(_SPECIES_SIGN, _SPECIES_SIGN)
    matrix = cross * rho_up[np.ix_(_IDX_UP, _IDX_UP)] * rho_dn[np.ix_(_IDX_DN, _IDX_DN)]
    return TwoOrbitalState(matrix)


def two_site_rdm(eta: float, distance: int) -> TwoOrbitalState:
    """Reduced state of two sites of the infinite free-fermion chain."""
    if distance < 1:
        raise ValueError("distance must be at least one lattice constant")
    return gaussian_pair_state(correlation_block(eta, distance))


def entanglement_vs_distance(eta: float, l_max: int) -> list[tuple[int, float]]:
    """Number-rule entanglement of site pairs at distances ``1 .. l_max``."""
    if l_max < 1:
        raise ValueError("l_max must be at least 1")
    series = []
    for distance in range(1, l_max + 1):
        result = orbital_entanglement(two_site_rdm(eta, distance), "number")
        series.append((distance, result.value))
    return series


def disentanglement_margin(eta: float, distance: int) -> float:
    """Exact sector-weight margin ``r - t`` of the two-site state.

    The sector weights are closed rational expressions in the correlator
    ``c``: the margin equals ``2 [ (eta^2 - c^2)((1-eta)^2 - c^2) - c^2 ]``
    and the pair is unentangled exactly when it is nonnegative.
    """
    c = correlation(eta, distance)
    c2 = c * c
    return 2.0 * ((eta**2 - c2) * ((1.0 - eta) ** 2 - c2) - c2)


def lmin_leading_order(eta: float) -> float:
    """Leading-order disentangling distance ``sqrt(2) / (pi eta (1 - eta))``."""
    _check_filling(eta)
    return math.sqrt(2.0) / (math.pi * eta * (1.0 - eta))


def disentangling_distance(eta: float, l_cap: int | None = None,
                           margin_tol: float = 1e-12) -> int:
    """Smallest distance beyond which the pair entanglement vanishes exactly.

    Scans ``1 .. l_cap`` (default: four times the rounded-up leading-order
    estimate, and at least three times it, so the tail assumption is
    explicit) and returns the smallest ``l`` such that every probed distance
    from ``l`` to the cap has disentanglement margin above ``margin_tol``.
    """
    _check_filling(eta)
    leading = lmin_leading_order(eta)
    if l_cap is None:
        l_cap = 4 * math.ceil(leading)
    if l_cap < math.ceil(3.0 * leading):
        raise ValueError("l_cap must be at least three times the leading-order estimate")
    last_entangled = 0
    for distance in range(1, l_cap + 1):
        if disentanglement_margin(eta, distance) <= margin_tol:
            last_entangled = distance
    if last_entangled >= l_cap:
        raise NotDisentangledWithinCapError(
            f"no disentangling distance found below the cap {l_cap}"
        )
    return last_entangled + 1


def finite_chain_correlation_matrix(length: int, n_per_spin: int,
                                    boundary: str = "open") -> np.ndarray:
    """Per-spin correlation matrix of the finite hopping-chain ground state.

    Fills the ``n_per_spin`` lowest single-particle eigenmodes of the
    nearest-neighbor hopping matrix (hopping amplitude one, negative sign
    convention).
    """
    if n_per_spin > length:
        raise ValueError("cannot fill more modes than sites")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    h = np.zeros((length, length))
    for site in range(length - 1):
        h[site, site + 1] = h[site + 1, site] = -1.0
    if boundary == "periodic" and length > 2:
        h[0, length - 1] += -1.0
        h[length - 1, 0] += -1.0
    _, modes = np.linalg.eigh(h)
    filled = modes[:, :n_per_spin]
    return filled @ filled.T


def finite_chain_correlation(length: int, n_per_spin: int, i: int, j: int,
                             boundary: str = "open") -> float:
    """Single correlator ``<f+_i f_j>`` of the finite-chain Fermi sea."""
    if not (0 <= i < length and 0 <= j < length):
        raise ValueError("site index out of range")
    return float(finite_chain_correlation_matrix(length, n_per_spin, boundary)[i, j])
