"""Superselection-rule projections, twirl channels and symmetry detection.

The particle-number and parity superselection rules act as pinchings of the
two-orbital density matrix onto fixed local-number or local-parity blocks.
Symmetry twirls are implemented the same way, as finite sums of eigenspace
projectors; for the generators used here this is exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import fock
from .errors import InsufficientSymmetryError
from .fock import TwoOrbitalState

__all__ = [
    "DETECTION_TOL",
    "FormulaVariant",
    "SymmetryCheck",
    "SymmetryReport",
    "nssr_project",
    "pssr_project",
    "twirl",
    "detect_symmetries",
    "select_formula",
]

#: Default tolerance for symmetry detection (ED/Wick outputs carry ~1e-13 noise).
DETECTION_TOL = 1e-10

TWIRL_GENERATORS = ("sz", "number", "total_spin", "local_number")


class FormulaVariant(enum.Enum):
    """Closed-formula variants, one per symmetry scenario."""

    NSSR_SINGLET = "number-ssr-singlet"
    NSSR_GENERAL = "number-ssr-general"
    PSSR_SYMMETRIC = "parity-ssr-symmetric"
    PSSR_GENERAL = "parity-ssr-general"

    @property
    def ssr(self) -> str:
        return "number" if self.value.startswith("number") else "parity"


def _pinch_by_labels(matrix: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Zero every element between basis states with different labels."""
    mask = labels[:, None] == labels[None, :]
    return np.where(mask, matrix, 0.0)


def _local_number_labels() -> np.ndarray:
    occ = fock.occupation_table(2)
    n_a = occ[:, 0] + occ[:, 1]
    n_b = occ[:, 2] + occ[:, 3]
    return np.asarray(n_a * 8 + n_b, dtype=np.int64)


def _local_parity_labels() -> np.ndarray:
    occ = fock.occupation_table(2)
    n_a = (occ[:, 0] + occ[:, 1]) % 2
    n_b = (occ[:, 2] + occ[:, 3]) % 2
    return np.asarray(n_a * 2 + n_b, dtype=np.int64)


def nssr_project(state: TwoOrbitalState) -> TwoOrbitalState:
    """Pinch onto fixed local-particle-number blocks (number superselection).

    Idempotent and trace preserving; kills all coherence between blocks of
    different ``(N_A, N_B)`` while leaving every within-block element alone.
    """
    return TwoOrbitalState(_pinch_by_labels(state.matrix, _local_number_labels()))


def pssr_project(state: TwoOrbitalState) -> TwoOrbitalState:
    """Pinch onto fixed local-parity blocks (parity superselection).

    Strictly weaker than :func:`nssr_project`: composing the two in either
    order gives the number projection.
    """
    return TwoOrbitalState(_pinch_by_labels(state.matrix, _local_parity_labels()))


def _diagonal_labels(generator: str) -> np.ndarray:
    occ = fock.occupation_table(2)
    if generator == "number":
        return occ.sum(axis=1).astype(np.int64)
    if generator == "sz":
        # twice Sz, to keep integer labels
        return np.asarray(
            occ[:, 0] - occ[:, 1] + occ[:, 2] - occ[:, 3], dtype=np.int64
        )
    if generator == "local_number":
        return _local_number_labels()
    raise ValueError(f"unsupported twirl generator {generator!r}")


def twirl(state: TwoOrbitalState, generator: str) -> TwoOrbitalState:
    """Average over the symmetry group of a generator (eigenspace pinching).

    Supported generators: ``sz``, ``number``, ``local_number`` and
    ``total_spin``.  The total-spin twirl removes the singlet/triplet
    coherence; the others pinch diagonal quantum-number blocks.
    """
    if generator == "total_spin":
        basis = fock.build_symmetry_basis("number")
        in_basis = basis.vectors.conj().T @ state.matrix @ basis.vectors
        # group by total-spin quantum number (0, 1/2, 1)
        labels = np.rint(2 * basis.spin).astype(np.int64)
        pinched = _pinch_by_labels(in_basis, labels)
        return TwoOrbitalState(basis.vectors @ pinched @ basis.vectors.conj().T)
    return TwoOrbitalState(_pinch_by_labels(state.matrix, _diagonal_labels(generator)))


class SymmetryCheck(NamedTuple):
    ok: bool
    residual: float


@dataclass(frozen=True)
class SymmetryReport:
    """Measured symmetry violations of a two-orbital state.

    Commutator checks carry the Frobenius norm of ``[rho, Q]`` (for the
    reflection, of ``R rho R - rho``); weight checks carry the absolute
    difference of the two symmetry-basis weights they compare.
    """

    number: SymmetryCheck
    magnetization: SymmetryCheck
    total_spin: SymmetryCheck
    reflection: SymmetryCheck
    triplet_balance: SymmetryCheck      # equal up-up and down-down weights
    particle_hole_balance: SymmetryCheck  # equal vacuum and fully-occupied weights
    tol: float

    def to_dict(self) -> dict:
        out = {"tol": self.tol}
        for name in (
            "number",
            "magnetization",
            "total_spin",
            "reflection",
            "triplet_balance",
            "particle_hole_balance",
        ):
            check: SymmetryCheck = getattr(self, name)
            out[name] = {"ok": bool(check.ok), "residual": float(check.residual)}
        return out


def _commutator_norm(matrix: np.ndarray, observable: np.ndarray) -> float:
    c = matrix @ observable - observable @ matrix
    return float(np.linalg.norm(c))


def detect_symmetries(state: TwoOrbitalState, tol: float = DETECTION_TOL) -> SymmetryReport:
    """Measure the symmetries that gate the closed entanglement formulas."""
    m = state.matrix
    reflection = fock.reflection_operator()
    basis = fock.build_symmetry_basis("number")
    weights = np.real(np.einsum("ij,jk,ki->i", basis.vectors.conj().T, m, basis.vectors))

    checks = {
        "number": _commutator_norm(m, fock.build_operator("number")),
        "magnetization": _commutator_norm(m, fock.build_operator("sz")),
        "total_spin": _commutator_norm(m, fock.build_operator("total_spin")),
        "reflection": float(np.linalg.norm(reflection @ m @ reflection.T - m)),
        "triplet_balance": abs(weights[fock.TRIPLET_UP] - weights[fock.TRIPLET_DOWN]),
        "particle_hole_balance": abs(weights[fock.VACUUM] - weights[fock.FULL]),
    }
    return SymmetryReport(
        tol=tol,
        **{name: SymmetryCheck(resid <= tol, resid) for name, resid in checks.items()},
    )


def select_formula(report: SymmetryReport, ssr: str) -> FormulaVariant:
    """Most specific closed-formula variant admissible for a symmetry report.

    Raises :class:`InsufficientSymmetryError` when no variant applies; the
    caller must then fall back to the brute-force minimizer.  The singlet-case
    variant is preferred whenever the triplet weights balance, regardless of
    how that balance arose.
    """
    if ssr == "number":
        if not report.magnetization.ok:
            raise InsufficientSymmetryError(
                "state does not commute with the magnetization; no closed formula applies"
            )
        if report.triplet_balance.ok:
            return FormulaVariant.NSSR_SINGLET
        if report.total_spin.ok or report.reflection.ok:
            return FormulaVariant.NSSR_GENERAL
        raise InsufficientSymmetryError(
            "unbalanced triplet weights need total-spin or reflection symmetry"
        )
    if ssr == "parity":
        if not (report.number.ok and report.magnetization.ok):
            raise InsufficientSymmetryError(
                "parity-rule formulas need particle-number and magnetization symmetry"
            )
        if report.particle_hole_balance.ok and report.triplet_balance.ok:
            return FormulaVariant.PSSR_SYMMETRIC
        if report.reflection.ok:
            return FormulaVariant.PSSR_GENERAL
        raise InsufficientSymmetryError(
            "unbalanced sector weights need the orbital-reflection symmetry"
        )
    raise ValueError(f"unknown superselection rule {ssr!r}")
