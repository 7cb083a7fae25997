"""
Approximative atomic systems for an operator K: verification, constructions
and the local-atom theorems.
"""
from .candidate import AtomicSystemCandidate
from .construct import (
    construct_from_bessel,
    construct_from_xd_bessel,
    converse_construction,
    e3_coefficient_map,
    e4_proof_identity_residual,
    e4_synthesis_map,
    necessary_range_test,
    range_equality,
)
from .derived import DerivedFamilies, e3_derived_families, e4_derived_families
from .theorems import (
    ComplementedAtoms,
    OperatorRangeAtoms,
    atoms_for_operator_range,
    characterize_local_atoms,
    complemented_subspace_atoms,
)
from .verify import (
    dual_reconstruction_residual,
    level_residuals,
    verify_atomic_system,
    verify_local_atoms,
)

__all__ = [
    "AtomicSystemCandidate",
    "ComplementedAtoms",
    "DerivedFamilies",
    "OperatorRangeAtoms",
    "atoms_for_operator_range",
    "characterize_local_atoms",
    "complemented_subspace_atoms",
    "construct_from_bessel",
    "construct_from_xd_bessel",
    "converse_construction",
    "dual_reconstruction_residual",
    "e3_coefficient_map",
    "e3_derived_families",
    "e4_derived_families",
    "e4_proof_identity_residual",
    "e4_synthesis_map",
    "level_residuals",
    "necessary_range_test",
    "range_equality",
    "verify_atomic_system",
    "verify_local_atoms",
]
