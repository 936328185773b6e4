"""Superselection-compliant entanglement between fermionic orbitals."""

from .entanglement import (
    EntanglementResult,
    SectorSpectrum,
    SeniorityCost,
    classical_correlation,
    closest_separable_state,
    entanglement_from_spectrum,
    is_pair_sector_separable,
    is_spin_sector_separable,
    mutual_information,
    nssr_entanglement_general,
    nssr_entanglement_singlet,
    orbital_entanglement,
    pssr_entanglement,
    sector_spectrum,
    seniority_cost,
)
from .errors import (
    DegenerateGroundStateError,
    DegenerateSectorError,
    InsufficientSymmetryError,
    NotDisentangledWithinCapError,
    OracleConvergenceError,
    OrbentError,
)
from .fock import (
    SymmetryEigenbasis,
    TwoOrbitalState,
    build_operator,
    build_symmetry_basis,
    partial_trace,
    partial_transpose,
    pure_state,
    reduce_to_orbitals,
    relative_entropy,
)
from .oracle import (
    ConstrainedSimplexProblem,
    OracleSolution,
    kl_min_oracle,
    ppt_oracle,
    wick_rdm_oracle,
)
from .ssr import (
    FormulaVariant,
    SymmetryReport,
    detect_symmetries,
    nssr_project,
    pssr_project,
    select_formula,
    twirl,
)

__version__ = "0.1.0"
