"""
The triple ({x_n}, {h_{n,i}}, K) under test.
"""
from dataclasses import dataclass, field

import numpy as np

from ..errors import raise_dimension_mismatch
from ..frames.family import VectorFamily
from ..linalg.spaces import LinearMap
from ..seqspace.scheme import SequenceNormConfig, TriangularFunctionalFamily


@dataclass(frozen=True, eq=False)
class AtomicSystemCandidate:
    family: VectorFamily
    H: TriangularFunctionalFamily
    K: LinearMap
    cfg: SequenceNormConfig = field(default_factory=SequenceNormConfig)

    def __post_init__(self):
        d = self.family.space.dim
        if self.H.space.dim != d:
            raise_dimension_mismatch(
                "Functionals and atoms must share a space", expected=d, actual=self.H.space.dim
            )
        if self.K.shape != (d, d):
            raise_dimension_mismatch(
                "K must map the space to itself", expected=[d, d], actual=list(self.K.shape)
            )
        if self.H.scheme.final_size > self.family.M:
            raise_dimension_mismatch(
                "The final level uses more atoms than the family has",
                expected=self.family.M,
                actual=self.H.scheme.final_size,
            )

    @property
    def dim(self) -> int:
        return self.family.space.dim

    def level_reconstruction(self, n: int) -> np.ndarray:
        """x -> sum_{i <= m_n} h_{n,i}(x) x_i as a single (d, d) matrix."""
        rows = self.H.level_matrix(n)
        return self.family.atoms[:, : rows.shape[0]] @ rows
