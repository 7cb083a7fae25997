"""
Seeded random instances for every scenario.

Hypotheses hold by construction: prescribed ranks come from factored
products A @ B, K = T C keeps Range K inside Range T, and projections are
built from complementary subspace pairs whose smallest principal angle
stays above MIN_ANGLE.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import InfeasibleSpecError
from ..frames.family import VectorFamily, shift_family
from ..linalg.inverses import ComplementPair, moore_penrose
from ..linalg.spaces import LinearMap, PNormSpace
from ..linalg.subspaces import kernel_basis, min_principal_angle, range_basis
from ..models.schemas import InstanceSpec
from ..seqspace.analysis import embed_classical
from ..seqspace.scheme import NormMode, SequenceNormConfig, TriangularFunctionalFamily

logger = logging.getLogger(__name__)

MIN_ANGLE = 0.1
MAX_DRAWS = 100


@dataclass(frozen=True, eq=False)
class ScenarioInstance:
    """Domain objects for one scenario; fields a scenario does not use stay None."""

    scenario: str
    seed: int
    family: Optional[VectorFamily] = None
    H: Optional[TriangularFunctionalFamily] = None
    K: Optional[LinearMap] = None
    W: Optional[LinearMap] = None
    P: Optional[LinearMap] = None
    complements: Optional[ComplementPair] = None
    cfg: SequenceNormConfig = field(default_factory=SequenceNormConfig)
    expect_pass: bool = True


def random_rank(rng: np.random.Generator, rows: int, cols: int, rank: int) -> np.ndarray:
    """Gaussian (rows, cols) matrix of the given rank, as a factored product."""
    if rank == 0:
        return np.zeros((rows, cols))
    return rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, cols))


def random_projection(rng: np.random.Generator, onto: np.ndarray) -> np.ndarray:
    """
    Oblique projection onto span(onto) along a random complement.

    Raises:
        InfeasibleSpecError: no well-separated complement was drawn
    """
    d, k = onto.shape
    if k == 0:
        return np.zeros((d, d))
    if k == d:
        return np.eye(d)
    for _ in range(MAX_DRAWS):
        complement = rng.standard_normal((d, d - k))
        if min_principal_angle(range_basis(onto), range_basis(complement)) >= MIN_ANGLE:
            Z = np.hstack([onto, complement])
            D = np.diag([1.0] * k + [0.0] * (d - k))
            return np.linalg.solve(Z.T, (Z @ D).T).T
    raise InfeasibleSpecError("Could not draw a well-separated complement", {"dim": d, "rank": k})


def _ranks(spec: InstanceSpec, d: int, M: int):
    rank_T = spec.rank_T if spec.rank_T is not None else min(d, M)
    rank_K = spec.rank_K if spec.rank_K is not None else rank_T
    if not 0 <= rank_T <= min(d, M):
        raise InfeasibleSpecError("rank_T exceeds the dimensions", {"rank_T": rank_T, "dims": [d, M]})
    if not 0 <= rank_K <= rank_T:
        raise InfeasibleSpecError("rank_K must not exceed rank_T", {"rank_K": rank_K, "rank_T": rank_T})
    return rank_T, rank_K


def _level_sizes(final: int, levels: int) -> list:
    levels = max(1, min(levels, final))
    return [int(round(final * (n + 1) / levels)) for n in range(levels)]


def _family(rng, d: int, M: int, rank: int, p: float, q: float) -> VectorFamily:
    return VectorFamily(PNormSpace(d, p), random_rank(rng, d, M, rank), q)


def _gen_e3(rng, spec, cfg) -> ScenarioInstance:
    d, M, _ = spec.dims
    p, q = spec.exponents
    rank_T, rank_K = _ranks(spec, d, M)
    family = _family(rng, d, M, rank_T, p, q)
    K = LinearMap(family.space, family.space, family.atoms @ random_rank(rng, M, d, rank_K))
    W = LinearMap(family.space, PNormSpace(M, q), rng.standard_normal((M, d)))
    k = K.entries
    complements = ComplementPair(
        LinearMap(family.space, family.space, random_projection(rng, kernel_basis(k))),
        LinearMap(family.space, family.space, random_projection(rng, range_basis(k))),
    )
    return ScenarioInstance("e3", spec.seed, family=family, K=K, W=W, complements=complements, cfg=cfg)


def _gen_e4(rng, spec, cfg) -> ScenarioInstance:
    d, m, levels = spec.dims
    p, q = spec.exponents
    rank_S = spec.rank_T if spec.rank_T is not None else min(d, m)
    if not 0 <= rank_S <= min(d, m):
        raise InfeasibleSpecError("rank_T exceeds the dimensions", {"rank_T": rank_S, "dims": [d, m]})
    if spec.rank_K is not None and spec.rank_K != rank_S:
        raise InfeasibleSpecError("Range K* = Range S* forces rank_K = rank_T", {"rank_K": spec.rank_K})
    if spec.negative and rank_S == d:
        raise InfeasibleSpecError("A negative e4 instance needs rank_T < d", {"rank_T": rank_S})
    space = PNormSpace(d, p)
    sizes = _level_sizes(m, levels)
    rows = [rng.standard_normal((size, d)) for size in sizes[:-1]]
    S = random_rank(rng, m, d, rank_S)
    H = TriangularFunctionalFamily.from_rows(space, rows + [S])
    if spec.negative:
        K = rng.standard_normal((d, d))
    else:
        K = rng.standard_normal((d, m)) @ S
    W = LinearMap(PNormSpace(m, q), space, rng.standard_normal((d, m)))
    return ScenarioInstance(
        "e4", spec.seed, H=H, K=LinearMap(space, space, K), W=W, cfg=cfg, expect_pass=not spec.negative
    )


def _gen_converse(rng, spec, cfg) -> ScenarioInstance:
    d, M, _ = spec.dims
    p, q = spec.exponents
    rank_T, rank_K = _ranks(spec, d, M)
    family = _family(rng, d, M, rank_T, p, q)
    if spec.negative:
        if rank_T == d:
            raise InfeasibleSpecError("A negative converse instance needs rank_T < d", {"rank_T": rank_T})
        K = rng.standard_normal((d, d))
    else:
        K = family.atoms @ random_rank(rng, M, d, rank_K)
    return ScenarioInstance(
        "converse", spec.seed, family=family, K=LinearMap(family.space, family.space, K),
        cfg=cfg, expect_pass=not spec.negative,
    )


def _gen_characterize(rng, spec, cfg) -> ScenarioInstance:
    d, M, _ = spec.dims
    p, q = spec.exponents
    rank_T, _ = _ranks(spec, d, M)
    family = _family(rng, d, M, rank_T, p, q)
    k = spec.rank_K if spec.rank_K is not None else max(1, rank_T // 2)
    if spec.negative:
        if rank_T == d:
            raise InfeasibleSpecError("A negative characterize instance needs rank_T < d", {"rank_T": rank_T})
        k = max(k, 1)
        # one direction outside Range T
        outside = kernel_basis(family.atoms.T)[:, :1]
        onto = np.hstack([outside, range_basis(family.atoms)[:, : k - 1]])
    else:
        if k > rank_T:
            raise InfeasibleSpecError("Range P must fit inside Range T", {"rank_K": k, "rank_T": rank_T})
        onto = range_basis(family.atoms) @ rng.standard_normal((rank_T, k)) if k else np.zeros((d, 0))
    P = random_projection(rng, onto)
    H = embed_classical(moore_penrose(LinearMap.from_matrix(family.atoms)).entries @ P, family.space)
    return ScenarioInstance(
        "characterize", spec.seed, family=family, H=H,
        P=LinearMap(family.space, family.space, P), cfg=cfg, expect_pass=not spec.negative,
    )


def _gen_complemented(rng, spec, cfg) -> ScenarioInstance:
    d, M, _ = spec.dims
    p, q = spec.exponents
    if M < d:
        raise InfeasibleSpecError("A frame needs at least as many atoms as the dimension", {"dims": [d, M]})
    family = _family(rng, d, M, d, p, q)
    H = embed_classical(moore_penrose(LinearMap.from_matrix(family.atoms)).entries, family.space)
    k = spec.rank_K if spec.rank_K is not None else max(1, d // 2)
    if not 0 <= k <= d:
        raise InfeasibleSpecError("Projection rank exceeds the dimension", {"rank_K": k, "dim": d})
    P = random_projection(rng, rng.standard_normal((d, k)))
    return ScenarioInstance(
        "complemented", spec.seed, family=family, H=H, P=LinearMap(family.space, family.space, P), cfg=cfg
    )


def _gen_shift(rng, spec, cfg) -> ScenarioInstance:
    d = spec.dims[0]
    if d < 2:
        raise InfeasibleSpecError("The shift family needs d >= 2", {"d": d})
    return ScenarioInstance("shift-example", spec.seed, family=shift_family(d), cfg=cfg)


def _gen_embed(rng, spec, cfg) -> ScenarioInstance:
    d, M, _ = spec.dims
    p, q = spec.exponents
    if M < d:
        raise InfeasibleSpecError("A classical decomposition needs M >= d", {"dims": [d, M]})
    family = _family(rng, d, M, d, p, q)
    f = moore_penrose(LinearMap.from_matrix(family.atoms)).entries
    return ScenarioInstance(
        "embed-classical", spec.seed, family=family, H=embed_classical(f, family.space),
        K=LinearMap.identity(family.space), cfg=SequenceNormConfig(q=q, mode=NormMode.ROW_SUP),
    )


def _gen_kframe(rng, spec, cfg) -> ScenarioInstance:
    d, M, _ = spec.dims
    rank_T, rank_K = _ranks(spec, d, M)
    family = _family(rng, d, M, rank_T, 2.0, 2.0)
    K = family.atoms @ random_rank(rng, M, d, rank_K)
    return ScenarioInstance(
        "kframe", spec.seed, family=family, K=LinearMap(family.space, family.space, K), cfg=cfg
    )


_GENERATORS = {
    "e3": _gen_e3,
    "e4": _gen_e4,
    "converse": _gen_converse,
    "characterize": _gen_characterize,
    "complemented": _gen_complemented,
    "shift-example": _gen_shift,
    "embed-classical": _gen_embed,
    "kframe": _gen_kframe,
}


def generate(spec: InstanceSpec, mode: NormMode = NormMode.ROW_SUP) -> ScenarioInstance:
    """
    Build the inputs of one scenario instance; the same spec gives bit-identical inputs.

    Raises:
        InfeasibleSpecError: rank targets or dimensions cannot be met
    """
    d, M, levels = spec.dims
    if min(d, M, levels) < 1:
        raise InfeasibleSpecError("Dimensions must be positive", {"dims": list(spec.dims)})
    rng = np.random.default_rng(spec.seed)
    cfg = SequenceNormConfig(q=spec.exponents[1], mode=mode)
    instance = _GENERATORS[spec.scenario](rng, spec, cfg)
    logger.debug(
        "generated instance",
        extra={"scenario": spec.scenario, "seed": spec.seed, "operation": "generate"},
    )
    return instance
