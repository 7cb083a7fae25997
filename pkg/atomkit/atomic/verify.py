"""
Verification of approximative atomic systems and families of local atoms.

Reconstruction at level n is the single matrix T_n U_n = X_{m_n} H_n; the
limit over n is judged on the final level, with r_1..r_N kept as a profile.
"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ..config import DEFAULT_TOL, RANK_RTOL, settings
from ..errors import ValidationAtomkitError
from ..frames.family import VectorFamily
from ..frames.operators import bessel_bound, synthesis_operator
from ..linalg.bounds import BoundEstimate, BoundMethod, operator_norm
from ..linalg.spaces import LinearMap, PNormSpace, conjugate_exponent, spectral_norm
from ..linalg.subspaces import numerical_rank, range_basis
from ..models.reports import Certificate, CheckResult
from ..seqspace.analysis import analyze, array_norm, limit_analysis_map, xd_bessel_bound
from ..seqspace.scheme import SequenceNormConfig, TriangularFunctionalFamily
from .candidate import AtomicSystemCandidate

logger = logging.getLogger(__name__)


def scaled_tol(tol: float, K: np.ndarray) -> float:
    """Absolute tolerance on spectral residuals, scaled by max(1, ||K||_2)."""
    return tol * max(1.0, spectral_norm(K))


def level_residuals(cand: AtomicSystemCandidate, restrict: Optional[np.ndarray] = None) -> List[float]:
    """r_n = ||(K - T_n U_n) Q||_2 per level; Q defaults to the identity."""
    K = cand.K.entries
    residuals = []
    for n in range(1, cand.H.scheme.N + 1):
        diff = K - cand.level_reconstruction(n)
        if restrict is not None:
            diff = diff @ restrict
        residuals.append(spectral_norm(diff))
    return residuals


def dual_reconstruction_residual(family: VectorFamily, H: TriangularFunctionalFamily, K: LinearMap) -> float:
    """||K* - H_N^T X_{m_N}^T||_2: how far K*(h) = sum h(x_i) h_{N,i} is from holding."""
    rows = H.limit_matrix()
    return spectral_norm(K.entries.T - rows.T @ family.atoms[:, : rows.shape[0]].T)


def _final_level_norms(
    family: VectorFamily, H: TriangularFunctionalFamily, cfg: SequenceNormConfig
) -> Tuple[BoundEstimate, BoundEstimate]:
    """||T_{m_N}|| on l^{cfg.q}(m_N) -> X and ||S_N|| on X -> l^{cfg.q}(m_N)."""
    m = H.scheme.final_size
    # coefficients are measured in cfg.q whatever the family's own exponent
    T = synthesis_operator(family.leading(m))
    synthesis = operator_norm(T.with_spaces(PNormSpace(m, cfg.q), family.space))
    analysis = operator_norm(limit_analysis_map(H, cfg.q))
    return synthesis, analysis


def _unit_samples(rng: np.random.Generator, basis: np.ndarray, p: float, count: int) -> np.ndarray:
    """count vectors in the span of basis, normalized in l^p; shape (dim, <= count)."""
    xs = basis @ rng.standard_normal((basis.shape[1], count))
    norms = np.linalg.norm(xs, ord=p, axis=0)
    keep = norms > 0
    return xs[:, keep] / norms[keep]


def _certified_constants(synthesis: BoundEstimate, analysis: BoundEstimate) -> Optional[Tuple[float, float]]:
    if synthesis.upper == 0 or analysis.upper == 0:
        return None
    return 1.0 / synthesis.upper, 1.0 / analysis.upper


def _constant_notes(
    cand: AtomicSystemCandidate,
    constants: Optional[Tuple[float, float]],
    tol: float,
    samples: int,
    seed: int,
) -> List[CheckResult]:
    """Sampled C ||Kx|| <= ||analyze(H, x)|| and D ||K* f|| <= ||{f(x_n)}||, up to the level-N error."""
    if constants is None:
        return []
    C, D = constants
    rng = np.random.default_rng(seed)
    identity = np.eye(cand.dim)
    p = cand.family.space.p
    p_dual = conjugate_exponent(p)
    q_dual = conjugate_exponent(cand.cfg.q)
    K = cand.K.entries
    err = K - cand.level_reconstruction(cand.H.scheme.N)

    worst_c, inf_c = 0.0, math.inf
    for x in _unit_samples(rng, identity, p, samples).T:
        kx = np.linalg.norm(K @ x, ord=p)
        coeffs = array_norm(analyze(cand.H, x), cand.cfg)
        worst_c = max(worst_c, C * (kx - np.linalg.norm(err @ x, ord=p)) - coeffs)
        if kx > 0:
            inf_c = min(inf_c, coeffs / kx)

    worst_d, inf_d = 0.0, math.inf
    for f in _unit_samples(rng, identity, p_dual, samples).T:
        kf = np.linalg.norm(K.T @ f, ord=p_dual)
        coeffs = np.linalg.norm(cand.family.atoms.T @ f, ord=q_dual)
        worst_d = max(worst_d, D * (kf - np.linalg.norm(err.T @ f, ord=p_dual)) - coeffs)
        if kf > 0:
            inf_d = min(inf_d, coeffs / kf)

    notes = [
        CheckResult.within("lower constant C", worst_c, tol),
        CheckResult.within("lower constant D", worst_d, tol),
    ]
    # empirical infima sit beside the certified constants
    if math.isfinite(inf_c):
        notes.append(CheckResult(name="sampled infimum C", passed=bool(C <= inf_c + tol), residual=inf_c, tol=tol))
    if math.isfinite(inf_d):
        notes.append(CheckResult(name="sampled infimum D", passed=bool(D <= inf_d + tol), residual=inf_d, tol=tol))
    return notes


def _log_certificate(kind: str, certificate: Certificate) -> None:
    logger.info(
        f"{kind} certificate: {'pass' if certificate.verdict else 'fail'}",
        extra={
            "operation": kind,
            "verdict": certificate.verdict,
            "residual": certificate.final_residual,
        },
    )


def verify_atomic_system(
    cand: AtomicSystemCandidate,
    tol: float = DEFAULT_TOL,
    samples: Optional[int] = None,
    seed: int = 0,
) -> Certificate:
    """
    Check that sum_{i <= m_n} h_{n,i}(x) x_i approaches Kx.

    Passes iff r_N <= tol * max(1, ||K||_2) and both Bessel bounds are
    finite. C and D are certified as 1 / ||T_{m_N}|| and 1 / ||S_N||.
    """
    samples = samples if samples is not None else settings.CHECK_SAMPLES
    effective_tol = scaled_tol(tol, cand.K.entries)
    residuals = level_residuals(cand)

    bessel_atoms = bessel_bound(cand.family)
    bessel_functionals = xd_bessel_bound(cand.H, cand.cfg)
    synthesis, analysis = _final_level_norms(cand.family, cand.H, cand.cfg)
    constants = _certified_constants(synthesis, analysis)

    notes = [
        CheckResult.within(
            "dual reconstruction",
            dual_reconstruction_residual(cand.family, cand.H, cand.K),
            effective_tol,
        )
    ]
    notes.extend(_constant_notes(cand, constants, effective_tol, samples, seed))

    verdict = (
        residuals[-1] <= effective_tol
        and math.isfinite(bessel_atoms.upper)
        and math.isfinite(bessel_functionals.upper)
    )
    certificate = Certificate(
        verdict=verdict,
        tol=effective_tol,
        bessel_atoms=bessel_atoms,
        bessel_functionals=bessel_functionals,
        level_residuals=residuals,
        constants=constants,
        notes=notes,
    )
    _log_certificate("atomic-system", certificate)
    return certificate


def subspace_basis(M_basis, dim: int, rtol: float = RANK_RTOL) -> np.ndarray:
    """
    Orthonormal basis of span(M_basis) as (dim, k) columns.

    Raises:
        ValidationAtomkitError: the given vectors are linearly dependent
    """
    B = np.asarray(M_basis, dtype=float)
    if B.size == 0:
        return np.zeros((dim, 0))
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    elif B.shape[0] != dim and B.shape[1] == dim:
        # a list of vectors arrives row-wise
        B = B.T
    if B.shape[0] != dim:
        raise ValidationAtomkitError("Subspace basis vectors must live in the space", {"dim": dim})
    if numerical_rank(B, rtol) < B.shape[1]:
        raise ValidationAtomkitError(
            "Degenerate subspace basis: vectors are linearly dependent",
            {"vectors": B.shape[1], "rank": numerical_rank(B, rtol)},
        )
    return range_basis(B, rtol)


def restricted_bessel_bound(
    H: TriangularFunctionalFamily, cfg: SequenceNormConfig, Q: np.ndarray
) -> BoundEstimate:
    """Sandwich on sup over unit x in span Q of ||analyze(H, x)||."""
    whole = xd_bessel_bound(H, cfg)
    if Q.shape[1] == 0:
        return BoundEstimate.exactly(0.0, BoundMethod.SVD)
    attained = max(
        array_norm(analyze(H, x), cfg) / np.linalg.norm(x, ord=H.space.p) for x in Q.T
    )
    return BoundEstimate(
        lower=min(attained, whole.upper), upper=whole.upper, method=BoundMethod.SAMPLE_POWER_ITERATION
    )


def _local_notes(
    family: VectorFamily,
    H: TriangularFunctionalFamily,
    cfg: SequenceNormConfig,
    Q: np.ndarray,
    tol: float,
    samples: int,
    seed: int,
) -> List[CheckResult]:
    """
    Derived atomic-decomposition inequalities on M, sampled:
    ||x|| <= A ||{h_{n,i}(x)}|| and |f(x)| <= B ||x|| ||{f(x_n)}||.
    """
    if Q.shape[1] == 0:
        return []
    rng = np.random.default_rng(seed)
    p = family.space.p
    q_dual = conjugate_exponent(cfg.q)
    m = H.scheme.final_size
    synthesis, analysis = _final_level_norms(family, H, cfg)
    A, B = synthesis.upper, analysis.upper
    err = np.eye(family.space.dim) - family.atoms[:, :m] @ H.limit_matrix()

    xs = _unit_samples(rng, Q, p, samples)
    worst_a = 0.0
    for x in xs.T:
        coeffs = array_norm(analyze(H, x), cfg)
        worst_a = max(worst_a, 1.0 - np.linalg.norm(err @ x, ord=p) - A * coeffs)

    worst_b = 0.0
    functionals = rng.standard_normal((family.space.dim, xs.shape[1]))
    for x, f in zip(xs.T, functionals.T):
        coeffs = np.linalg.norm(family.atoms[:, :m].T @ f, ord=q_dual)
        worst_b = max(worst_b, abs(f @ x) - abs(f @ (err @ x)) - B * coeffs)

    return [
        CheckResult.within("local reconstruction inequality", worst_a, tol),
        CheckResult.within("local dual inequality", worst_b, tol),
    ]


def verify_local_atoms(
    family: VectorFamily,
    H: TriangularFunctionalFamily,
    M_basis,
    tol: float = DEFAULT_TOL,
    cfg: Optional[SequenceNormConfig] = None,
    samples: Optional[int] = None,
    seed: int = 0,
) -> Certificate:
    """Check that {x_n}, {h_{n,i}} reconstruct every x of span(M_basis)."""
    cfg = cfg or SequenceNormConfig()
    samples = samples if samples is not None else settings.CHECK_SAMPLES
    d = family.space.dim
    Q = subspace_basis(M_basis, d)
    cand = AtomicSystemCandidate(family, H, LinearMap.identity(family.space), cfg)

    if Q.shape[1] == 0:
        residuals = [0.0] * H.scheme.N
    else:
        residuals = level_residuals(cand, restrict=Q)

    bessel_atoms = bessel_bound(family)
    bessel_functionals = restricted_bessel_bound(H, cfg, Q)
    verdict = (
        residuals[-1] <= tol
        and math.isfinite(bessel_atoms.upper)
        and math.isfinite(bessel_functionals.upper)
    )
    certificate = Certificate(
        verdict=verdict,
        tol=tol,
        bessel_atoms=bessel_atoms,
        bessel_functionals=bessel_functionals,
        level_residuals=residuals,
        notes=_local_notes(family, H, cfg, Q, tol, samples, seed),
        kind="local-atoms",
    )
    _log_certificate("local-atoms", certificate)
    return certificate
