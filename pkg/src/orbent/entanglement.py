"""Closed-form relative entropy of entanglement for two fermionic orbitals.

For states with the right symmetries the superselected density matrix is
diagonal in the symmetry eigenbasis and the entanglement minimization reduces
to a Kullback-Leibler problem over sector weights with one quadratic
separability constraint per two-qubit sector.  This module extracts those
weights and evaluates the closed solutions; the independent brute-force path
lives in :mod:`orbent.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fock, oracle, ssr
from .errors import DegenerateSectorError, InsufficientSymmetryError, OrbentError
from .fock import (
    DOUBLE_A,
    DOUBLE_B,
    FULL,
    SINGLET,
    TRIPLET_DOWN,
    TRIPLET_UP,
    TRIPLET_ZERO,
    VACUUM,
    SymmetryEigenbasis,
    TwoOrbitalState,
)
from .ssr import FormulaVariant

__all__ = [
    "SectorSpectrum",
    "EntanglementResult",
    "SeniorityCost",
    "sector_spectrum",
    "is_spin_sector_separable",
    "is_pair_sector_separable",
    "nssr_entanglement_singlet",
    "nssr_entanglement_general",
    "pssr_entanglement",
    "entanglement_from_spectrum",
    "orbital_entanglement",
    "closest_separable_state",
    "mutual_information",
    "classical_correlation",
    "seniority_cost",
]

#: Rank threshold below which an entangled sector counts as degenerate.
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class SectorSpectrum:
    """Symmetry-basis weights and intra-sector coherences of a state.

    ``weights[i]`` is the expectation in the i-th basis vector of the chosen
    variant; ``spin_coherence`` is the singlet/triplet-zero matrix element and
    ``pair_coherence`` the one between the two doublon combinations.
    """

    weights: np.ndarray
    spin_coherence: complex = 0.0
    pair_coherence: complex = 0.0
    variant: str = "number"

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (fock.DIM,):
            raise ValueError("expected 16 sector weights")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError("sector weights must sum to one")
        if w.min() < -1e-12:
            raise ValueError("sector weights must be nonnegative")
        w = np.clip(w, 0.0, None)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        tol = 1e-10
        if abs(self.spin_coherence) ** 2 > w[SINGLET] * w[TRIPLET_ZERO] + tol:
            raise ValueError("spin coherence violates 2x2 block positivity")
        if abs(self.pair_coherence) ** 2 > w[DOUBLE_A] * w[DOUBLE_B] + tol:
            raise ValueError("pair coherence violates 2x2 block positivity")


def sector_spectrum(state: TwoOrbitalState, basis: SymmetryEigenbasis | str = "number") -> SectorSpectrum:
    """Diagonal weights and coherences of a state in a symmetry eigenbasis."""
    if isinstance(basis, str):
        basis = fock.build_symmetry_basis(basis)
    m = state.matrix
    v = basis.vectors
    weights = np.real(np.einsum("ji,jk,ki->i", v.conj(), m, v))
    b = complex(v[:, SINGLET].conj() @ m @ v[:, TRIPLET_ZERO])
    b_pair = complex(v[:, DOUBLE_A].conj() @ m @ v[:, DOUBLE_B])
    return SectorSpectrum(weights, b, b_pair, basis.variant)


def is_spin_sector_separable(w_singlet: float, w_triplet0: float, w_up: float, w_dn: float) -> bool:
    """Separability of the single-occupancy sector of a symmetric state."""
    if min(w_singlet, w_triplet0, w_up, w_dn) < -1e-12:
        raise ValueError("sector weights must be nonnegative")
    return w_up * w_dn >= ((w_singlet - w_triplet0) / 2.0) ** 2


def is_pair_sector_separable(w_vacuum: float, w_pair_a: float, w_pair_b: float, w_full: float) -> bool:
    """Separability of the even-parity corner sector (parity-basis weights)."""
    if min(w_vacuum, w_pair_a, w_pair_b, w_full) < -1e-12:
        raise ValueError("sector weights must be nonnegative")
    return w_vacuum * w_full >= ((w_pair_a - w_pair_b) / 2.0) ** 2


def _kl_terms(p: tuple[float, ...], q: tuple[float, ...]) -> float:
    total = 0.0
    for pi, qi in zip(p, q):
        if pi > 0.0:
            total += pi * math.log(pi / qi)
    return total


def _linear_sector_solution(x: float, y: float, u: float, v: float):
    """Closest-sector solution when the two product weights balance.

    ``(x, y)`` are the coherence-pair weights, ``(u, v)`` the product-pair
    weights with ``u = v`` assumed (the quadratic boundary degenerates to a
    linear one).  Returns ``(value, (qx, qy, qu, qv), details)``.
    """
    t = max(x, y)
    r = min(x, y) + u + v
    if r >= t:
        return 0.0, (x, y, u, v), {"r": r, "t": t, "separable": True}
    half = (r + t) / 2.0
    if r == 0.0:
        # pure-coherence corner: minimizer is not unique; put the balancing
        # mass on the partner weight so the sector mass is conserved
        value = t * math.log(2.0)
        q_large, q_small, qu, qv = half, half, 0.0, 0.0
    else:
        value = r * math.log(2.0 * r / (r + t)) + t * math.log(2.0 * t / (r + t))
        q_large = half
        q_small = half * min(x, y) / r
        qu = qv = half * (u + v) / (2.0 * r)
    q = (q_large, q_small, qu, qv) if x >= y else (q_small, q_large, qu, qv)
    return value, q, {"r": r, "t": t, "separable": False}


def _general_sector_solution(x: float, y: float, u: float, v: float,
                             degenerate_tol: float = DEGENERATE_TOL):
    """Closest-sector solution for unbalanced product weights (full rank)."""
    if u * v >= ((x - y) / 2.0) ** 2:
        return 0.0, (x, y, u, v), {"separable": True}
    if min(x, y, u, v) < degenerate_tol:
        raise DegenerateSectorError(
            "entangled sector is rank deficient; use the brute-force minimizer"
        )
    a, b = (x, y) if x >= y else (y, x)
    s = x + y + u + v
    big_a = s * s - (u - v) ** 2
    big_b = (a - b) * s
    big_c = (u + v) ** 2 * (a - b) ** 2 + 8.0 * u * v * (
        2.0 * u * v + (u + v) * (a + b) + 2.0 * a * b
    )
    root = math.sqrt(big_c)
    qa = (big_a + big_b + root) / (4.0 * (s - b))
    qb = (big_a - big_b - root) / (4.0 * (s - a))
    shift = (a + b - qa - qb) / 2.0
    qu = u + shift
    qv = v + shift
    qx, qy = (qa, qb) if x >= y else (qb, qa)
    if min(qx, qy, qu, qv) < -1e-13:
        raise OrbentError("closed-form sector solution left the simplex")
    value = _kl_terms((x, y, u, v), (qx, qy, qu, qv))
    details = {"A": big_a, "B": big_b, "C": big_c, "s": s, "separable": False}
    return value, (qx, qy, qu, qv), details


@dataclass(frozen=True)
class EntanglementResult:
    """Entanglement value in nats plus the closest separable weights."""

    value: float
    variant: FormulaVariant | None
    closest_weights: np.ndarray
    basis_variant: str
    method: str = "closed-form"
    details: dict = field(default_factory=dict)
    coherence_twirled: bool = False

    def __post_init__(self):
        q = np.asarray(self.closest_weights, dtype=float)
        if abs(q.sum() - 1.0) > 1e-10:
            raise ValueError("closest separable weights must sum to one")
        q.setflags(write=False)
        object.__setattr__(self, "closest_weights", q)
        if self.value < -1e-12:
            raise ValueError("entanglement must be nonnegative")


def _check_coherences(spectrum: SectorSpectrum, tol: float, twirl_coherence: bool,
                      which: tuple[str, ...]) -> bool:
    """Enforce the coherence policy; returns True when a twirl was absorbed.

    Imaginary coherence always disqualifies the closed formulas (it enters
    the separability boundary); real coherence may be removed by the
    corresponding twirl when the caller opts in, which only changes the state
    by the pinching the formulas presume anyway.
    """
    twirled = False
    values = {"spin": spectrum.spin_coherence, "pair": spectrum.pair_coherence}
    for name in which:
        b = values[name]
        if abs(b.imag) > tol:
            raise InsufficientSymmetryError(
                f"imaginary {name} coherence {b.imag:.3e} disqualifies the closed formulas"
            )
        if abs(b.real) > tol:
            if not twirl_coherence:
                raise InsufficientSymmetryError(
                    f"{name} coherence {b.real:.3e} present; pass twirl_coherence=True "
                    "to absorb it by the symmetry twirl"
                )
            twirled = True
    return twirled


def nssr_entanglement_singlet(spectrum: SectorSpectrum, tol: float = ssr.DETECTION_TOL,
                              twirl_coherence: bool = False) -> EntanglementResult:
    """Number-rule entanglement for balanced triplet weights.

    Requires a number-variant spectrum with equal up-up and down-down triplet
    weights (automatic for reduced states of global singlets).
    """
    if spectrum.variant != "number":
        raise ValueError("singlet-case formula needs a number-variant spectrum")
    p = spectrum.weights
    if abs(p[TRIPLET_UP] - p[TRIPLET_DOWN]) > tol:
        raise InsufficientSymmetryError(
            "triplet weights are unbalanced; use the general formula"
        )
    if abs(spectrum.pair_coherence) > tol:
        raise InsufficientSymmetryError(
            "doublon coherence present; apply the number-rule projection first"
        )
    twirled = _check_coherences(spectrum, tol, twirl_coherence, ("spin",))
    value, q_sector, details = _linear_sector_solution(
        p[SINGLET], p[TRIPLET_ZERO], p[TRIPLET_UP], p[TRIPLET_DOWN]
    )
    q = p.copy()
    q[[SINGLET, TRIPLET_ZERO, TRIPLET_UP, TRIPLET_DOWN]] = q_sector
    return EntanglementResult(
        value=value,
        variant=FormulaVariant.NSSR_SINGLET,
        closest_weights=q,
        basis_variant="number",
        details=details,
        coherence_twirled=twirled,
    )


def nssr_entanglement_general(spectrum: SectorSpectrum, tol: float = ssr.DETECTION_TOL,
                              twirl_coherence: bool = False) -> EntanglementResult:
    """Number-rule entanglement without the triplet-balance assumption.

    Needs a full-rank entangled spin sector; a rank-deficient one raises
    :class:`DegenerateSectorError` and the caller should fall back to the
    brute-force minimizer.  Reduces exactly to the singlet-case result when
    the triplet weights balance.
    """
    if spectrum.variant != "number":
        raise ValueError("number-rule formula needs a number-variant spectrum")
    p = spectrum.weights
    if abs(spectrum.pair_coherence) > tol:
        raise InsufficientSymmetryError(
            "doublon coherence present; apply the number-rule projection first"
        )
    twirled = _check_coherences(spectrum, tol, twirl_coherence, ("spin",))
    value, q_sector, details = _general_sector_solution(
        p[SINGLET], p[TRIPLET_ZERO], p[TRIPLET_UP], p[TRIPLET_DOWN]
    )
    q = p.copy()
    q[[SINGLET, TRIPLET_ZERO, TRIPLET_UP, TRIPLET_DOWN]] = q_sector
    return EntanglementResult(
        value=value,
        variant=FormulaVariant.NSSR_GENERAL,
        closest_weights=q,
        basis_variant="number",
        details=details,
        coherence_twirled=twirled,
    )


def pssr_entanglement(spectrum: SectorSpectrum, tol: float = ssr.DETECTION_TOL,
                      twirl_coherence: bool = False) -> EntanglementResult:
    """Parity-rule entanglement from a parity-variant spectrum.

    The two two-qubit sectors are independent: the single-occupancy sector is
    handled as in the number-rule case and the even-parity corner sector
    contributes through the vacuum/doublon/full weights.  Per sector, the
    balanced case uses the linear solution and the unbalanced case the
    general one.
    """
    if spectrum.variant != "parity":
        raise ValueError("parity-rule formula needs a parity-variant spectrum")
    p = spectrum.weights
    twirled = _check_coherences(spectrum, tol, twirl_coherence, ("spin", "pair"))

    spin_balanced = abs(p[TRIPLET_UP] - p[TRIPLET_DOWN]) <= tol
    if spin_balanced:
        value_m, q_m, det_m = _linear_sector_solution(
            p[SINGLET], p[TRIPLET_ZERO], p[TRIPLET_UP], p[TRIPLET_DOWN]
        )
    else:
        value_m, q_m, det_m = _general_sector_solution(
            p[SINGLET], p[TRIPLET_ZERO], p[TRIPLET_UP], p[TRIPLET_DOWN]
        )

    pair_balanced = abs(p[VACUUM] - p[FULL]) <= tol
    if pair_balanced:
        value_mp, q_mp, det_mp = _linear_sector_solution(
            p[DOUBLE_A], p[DOUBLE_B], p[VACUUM], p[FULL]
        )
    else:
        value_mp, q_mp, det_mp = _general_sector_solution(
            p[DOUBLE_A], p[DOUBLE_B], p[VACUUM], p[FULL]
        )

    q = p.copy()
    q[[SINGLET, TRIPLET_ZERO, TRIPLET_UP, TRIPLET_DOWN]] = q_m
    q[[DOUBLE_A, DOUBLE_B, VACUUM, FULL]] = q_mp
    variant = (
        FormulaVariant.PSSR_SYMMETRIC
        if spin_balanced and pair_balanced
        else FormulaVariant.PSSR_GENERAL
    )
    details = {"spin_sector": det_m, "pair_sector": det_mp}
    return EntanglementResult(
        value=value_m + value_mp,
        variant=variant,
        closest_weights=q,
        basis_variant="parity",
        details=details,
        coherence_twirled=twirled,
    )


_FORMULA_DISPATCH = {
    FormulaVariant.NSSR_SINGLET: nssr_entanglement_singlet,
    FormulaVariant.NSSR_GENERAL: nssr_entanglement_general,
    FormulaVariant.PSSR_SYMMETRIC: pssr_entanglement,
    FormulaVariant.PSSR_GENERAL: pssr_entanglement,
}


def entanglement_from_spectrum(spectrum: SectorSpectrum, variant: FormulaVariant,
                               tol: float = ssr.DETECTION_TOL,
                               twirl_coherence: bool = False) -> EntanglementResult:
    """Evaluate a specific closed-formula variant on a sector spectrum."""
    return _FORMULA_DISPATCH[variant](spectrum, tol=tol, twirl_coherence=twirl_coherence)


def _project(state: TwoOrbitalState, which: str) -> TwoOrbitalState:
    if which == "number":
        return ssr.nssr_project(state)
    if which == "parity":
        return ssr.pssr_project(state)
    raise ValueError(f"unknown superselection rule {which!r}")


def orbital_entanglement(state: TwoOrbitalState, rule: str = "number",
                         tol: float = ssr.DETECTION_TOL,
                         twirl_coherence: bool = False,
                         fallback_oracle: bool = True) -> EntanglementResult:
    """Superselection-compliant entanglement of a two-orbital state.

    Projects the state per the chosen rule, detects its symmetries, selects
    the most specific closed formula and evaluates it.  A rank-deficient
    entangled sector falls back to the brute-force minimizer unless
    ``fallback_oracle`` is disabled; missing symmetries always raise
    :class:`InsufficientSymmetryError`.
    """
    projected = _project(state, rule)
    off_diagonal = projected.matrix - np.diag(np.diag(projected.matrix))
    if np.abs(off_diagonal).max() <= tol:
        # occupation-diagonal states are classical mixtures of products:
        # unentangled, and their own closest separable state
        return EntanglementResult(
            value=0.0,
            variant=None,
            closest_weights=sector_spectrum(projected, "number").weights,
            basis_variant="number",
            method="classical-mixture",
        )
    report = ssr.detect_symmetries(projected, tol)
    variant = ssr.select_formula(report, rule)
    spectrum = sector_spectrum(projected, variant.ssr)
    try:
        return entanglement_from_spectrum(spectrum, variant, tol=tol,
                                          twirl_coherence=twirl_coherence)
    except DegenerateSectorError:
        if not fallback_oracle:
            raise
        problem = oracle.ConstrainedSimplexProblem(spectrum.weights, rule)
        solution = oracle.kl_min_oracle(problem)
        return EntanglementResult(
            value=solution.value,
            variant=None,
            closest_weights=solution.weights,
            basis_variant=variant.ssr,
            method="oracle",
            details={
                "selected_variant": variant.value,
                "feasibility_residual": solution.feasibility_residual,
                "stationarity_residual": solution.stationarity_residual,
            },
        )


def closest_separable_state(state: TwoOrbitalState, rule: str = "number",
                            tol: float = ssr.DETECTION_TOL,
                            twirl_coherence: bool = False) -> TwoOrbitalState:
    """Closest separable state to the superselected input, when a formula applies."""
    result = orbital_entanglement(state, rule, tol=tol,
                                  twirl_coherence=twirl_coherence)
    if result.method == "classical-mixture":
        return _project(state, rule)
    basis = fock.build_symmetry_basis(result.basis_variant)
    v = basis.vectors
    sigma = (v * result.closest_weights) @ v.conj().T
    return TwoOrbitalState(sigma)


def mutual_information(state: TwoOrbitalState) -> float:
    """Total correlation ``S(rho_AB || rho_A x rho_B)`` in nats."""
    rho_a = fock.single_orbital_rdm(state, 0)
    rho_b = fock.single_orbital_rdm(state, 1)
    return fock.relative_entropy(state.matrix, np.kron(rho_a, rho_b))


def classical_correlation(state: TwoOrbitalState, rule: str = "number",
                          tol: float = ssr.DETECTION_TOL,
                          twirl_coherence: bool = False) -> float:
    """Correlation of the closest separable state with the product of marginals."""
    sigma = closest_separable_state(state, rule, tol=tol,
                                    twirl_coherence=twirl_coherence)
    rho_a = fock.single_orbital_rdm(state, 0)
    rho_b = fock.single_orbital_rdm(state, 1)
    return fock.relative_entropy(sigma.matrix, np.kron(rho_a, rho_b))


@dataclass(frozen=True)
class SeniorityCost:
    """Summed pair entanglement of a set of orbital-pair reduced states."""

    total: float
    per_pair: tuple
    failures: tuple
    partial: bool


def seniority_cost(pair_rdms, rule: str = "number", tol: float = ssr.DETECTION_TOL) -> SeniorityCost:
    """Sum of pair entanglements over a list of two-orbital reduced states.

    Pairs whose evaluation fails are reported individually; the total is then
    over the successes only and the result is flagged partial.
    """
    values = []
    failures = []
    for k, rdm in enumerate(pair_rdms):
        try:
            result = orbital_entanglement(rdm, rule, tol=tol)
            values.append(result.value)
        except OrbentError as exc:
            values.append(None)
            failures.append((k, str(exc)))
    total = sum(v for v in values if v is not None)
    return SeniorityCost(
        total=total,
        per_pair=tuple(values),
        failures=tuple(failures),
        partial=bool(failures),
    )
