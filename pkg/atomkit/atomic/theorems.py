"""
Local atoms for operator ranges and complemented subspaces, and the
three-way characterization of local atoms through T U P = P.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import DEFAULT_TOL, RANK_RTOL
from ..errors import DecompositionFailureError, UnverifiedCandidateError, raise_validation_error
from ..frames.family import VectorFamily
from ..frames.operators import bessel_bound, synthesis_operator
from ..linalg.bounds import operator_norm
from ..linalg.factorization import range_inclusion
from ..linalg.inverses import (
    IDEMPOTENCE_TOL,
    ComplementPair,
    generalized_inverse,
    idempotence_residual,
    moore_penrose,
)
from ..linalg.spaces import LinearMap, PNormSpace, spectral_norm
from ..linalg.subspaces import kernel_basis, min_principal_angle, range_basis
from ..models.reports import Certificate, CheckResult, EquivalenceReport
from ..seqspace.analysis import embed_classical, xd_bessel_bound
from ..seqspace.scheme import SequenceNormConfig, TriangularFunctionalFamily
from .candidate import AtomicSystemCandidate
from .verify import (
    restricted_bessel_bound,
    scaled_tol,
    verify_atomic_system,
    verify_local_atoms,
)

logger = logging.getLogger(__name__)

MIN_COMPLEMENT_ANGLE = 1e-6


def _require_verified(cand: AtomicSystemCandidate, tol: float) -> Certificate:
    certificate = verify_atomic_system(cand, tol)
    if not certificate.verdict:
        raise UnverifiedCandidateError(
            "Candidate is not an approximative atomic system", residual=certificate.final_residual
        )
    return certificate


def _require_projection(P: LinearMap) -> None:
    """Same idempotence threshold as ComplementPair, which P later feeds."""
    if P.shape[0] != P.shape[1]:
        raise_validation_error("P must be square", {"shape": list(P.shape)})
    residual = idempotence_residual(P.entries)
    if residual > IDEMPOTENCE_TOL:
        raise_validation_error("P is not idempotent", {"residual": residual, "tol": IDEMPOTENCE_TOL})


@dataclass(frozen=True, eq=False)
class OperatorRangeAtoms:
    functionals: TriangularFunctionalFamily
    generalized_inverse: LinearMap
    local_atoms: Certificate
    dual_decomposition: Certificate


def atoms_for_operator_range(
    cand: AtomicSystemCandidate,
    complements: ComplementPair,
    tol: float = DEFAULT_TOL,
    rtol: float = RANK_RTOL,
) -> OperatorRangeAtoms:
    """
    f_{n,i} = h_{n,i} ∘ K^+ on K(X), with K^+ fixed by the complement pair.

    Two certificates come back: {x_n}, {f_{n,i}} reconstruct every element
    of K(X), and every functional on K(X) expands as sum h(x_i) f_{n,i}.
    """
    _require_verified(cand, tol)
    k_dag = generalized_inverse(cand.K, complements, rtol=rtol)
    f = cand.H.pushed(k_dag.entries)
    basis = range_basis(cand.K.entries, rtol)

    local = verify_local_atoms(cand.family, f, basis, tol, cand.cfg)

    # coordinate functionals span X*; restrict each to K(X) through the basis
    identity = np.eye(cand.dim)
    residuals = []
    for n in range(1, f.scheme.N + 1):
        rows = f.level_matrix(n)
        expansion = rows.T @ cand.family.atoms[:, : rows.shape[0]].T
        residuals.append(spectral_norm(basis.T @ (identity - expansion)) if basis.shape[1] else 0.0)

    h_bound = xd_bessel_bound(cand.H, cand.cfg)
    f_bound = restricted_bessel_bound(f, cand.cfg, basis)
    k_dag_norm = operator_norm(k_dag)
    excess = max(0.0, f_bound.lower - h_bound.upper * k_dag_norm.upper)
    dual = Certificate(
        verdict=bool(residuals[-1] <= tol),
        tol=tol,
        bessel_atoms=bessel_bound(cand.family),
        bessel_functionals=f_bound,
        level_residuals=residuals,
        notes=[CheckResult.within("Bessel bound through K^+", excess, tol)],
        kind="dual-decomposition",
    )
    logger.info(
        "operator-range atoms",
        extra={
            "operation": "atoms_for_operator_range",
            "verdict": local.verdict and dual.verdict,
            "residual": max(local.final_residual, dual.final_residual),
        },
    )
    return OperatorRangeAtoms(
        functionals=f, generalized_inverse=k_dag, local_atoms=local, dual_decomposition=dual
    )


def characterize_local_atoms(
    family: VectorFamily,
    H: Optional[TriangularFunctionalFamily],
    P: LinearMap,
    tol: float = DEFAULT_TOL,
    cfg: Optional[SequenceNormConfig] = None,
    rtol: float = RANK_RTOL,
) -> EquivalenceReport:
    """
    Evaluate independently:
      (a) {x_n}, {h_{n,i}} are local atoms for Range P,
      (b) {x_n}, {P*(h_{n,i})} form an atomic system for P,
      (c) T U P = P, with U the final-level analysis map of H.

    Without H, U = T^+ P witnesses (c) whenever Range P ⊆ Range T, and the
    functionals h_n = U*(e_n*) are used for (a) and (b).
    """
    cfg = cfg or SequenceNormConfig()
    _require_projection(P)
    T = synthesis_operator(family)
    p = P.entries

    inclusion = range_inclusion(P, T, tol, rtol)
    if H is None:
        H = embed_classical(moore_penrose(T, rtol).entries @ p, family.space)
    u = H.limit_matrix()
    t = family.atoms[:, : u.shape[0]]
    factor_residual = spectral_norm(t @ u @ p - p)
    verdict_c = factor_residual <= scaled_tol(tol, p)

    local = verify_local_atoms(family, H, range_basis(p, rtol), tol, cfg)
    pushed = AtomicSystemCandidate(family, H.pushed(p), P, cfg)
    system = verify_atomic_system(pushed, tol)

    report = EquivalenceReport(
        verdicts={
            "local-atoms": local.verdict,
            "atomic-system": system.verdict,
            "factorization": bool(verdict_c),
        },
        checks=[
            CheckResult.within("local reconstruction on Range P", local.final_residual, local.tol),
            CheckResult.within("reconstruction of P", system.final_residual, system.tol),
            CheckResult.within("T U P = P", factor_residual, scaled_tol(tol, p)),
            CheckResult.within("Range P ⊆ Range T", inclusion.residual, inclusion.threshold),
        ],
    )
    logger.info(
        "local atoms characterization",
        extra={"operation": "characterize_local_atoms", "verdict": report.verdict, "event": "agree" if report.agree else "disagree"},
    )
    return report


@dataclass(frozen=True, eq=False)
class ComplementedAtoms:
    atoms: VectorFamily
    functionals: TriangularFunctionalFamily
    certificate: Certificate
    min_angle: float
    condition: float


def _oblique_kernel_projection(range_part: np.ndarray, kernel_part: np.ndarray) -> np.ndarray:
    """Projection onto span(kernel_part) along span(range_part)."""
    Z = np.hstack([range_part, kernel_part])
    D = np.diag([0.0] * range_part.shape[1] + [1.0] * kernel_part.shape[1])
    # (Z D) Z^{-1}
    return np.linalg.solve(Z.T, (Z @ D).T).T


def complemented_subspace_atoms(
    family: VectorFamily,
    H: TriangularFunctionalFamily,
    P: LinearMap,
    tol: float = DEFAULT_TOL,
    cfg: Optional[SequenceNormConfig] = None,
    rtol: float = RANK_RTOL,
) -> ComplementedAtoms:
    """
    Local atoms for the complemented subspace Range P of a space with a
    reconstructing pair I = T S.

    y_n = P x_n, T_1 = P T, and T_1^+ is the generalized inverse with
    l^q(m_N) = S(Range P) ⊕ ker T_1; f_n is the n-th coordinate of T_1^+.

    Raises:
        DecompositionFailureError: S(Range P) and ker T_1 are numerically not complementary
    """
    cfg = cfg or SequenceNormConfig()
    _require_verified(AtomicSystemCandidate(family, H, LinearMap.identity(family.space), cfg), tol)
    _require_projection(P)

    m = H.scheme.final_size
    t1 = P.entries @ family.atoms[:, :m]
    basis = range_basis(P.entries, rtol)
    range_part = range_basis(H.limit_matrix() @ basis, rtol) if basis.shape[1] else np.zeros((m, 0))
    kernel_part = kernel_basis(t1, rtol)

    angle = min_principal_angle(range_part, kernel_part)
    if range_part.shape[1] + kernel_part.shape[1] != m:
        raise DecompositionFailureError(
            "S(Range P) and ker T_1 do not add up to the coefficient space",
            min_angle=angle,
            condition=float("inf"),
        )
    condition = float(np.linalg.cond(np.hstack([range_part, kernel_part])))
    if angle < MIN_COMPLEMENT_ANGLE:
        raise DecompositionFailureError(
            "S(Range P) and ker T_1 are numerically not complementary",
            min_angle=angle,
            condition=condition,
        )

    coefficients = PNormSpace(m, family.q)
    T1 = LinearMap(coefficients, family.space, t1)
    pair = ComplementPair(
        LinearMap(coefficients, coefficients, _oblique_kernel_projection(range_part, kernel_part)),
        P.with_spaces(family.space, family.space),
    )
    t1_dag = generalized_inverse(T1, pair, rtol=rtol)

    atoms = family.mapped(P.entries)
    functionals = embed_classical(t1_dag.entries, family.space)
    certificate = verify_local_atoms(atoms, functionals, basis, tol, cfg)
    return ComplementedAtoms(
        atoms=atoms,
        functionals=functionals,
        certificate=certificate,
        min_angle=angle,
        condition=condition,
    )
