import os
import sys

import numpy as np
import pytest

# Ensure project root on path so `import atomkit` works when running from repo root
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from atomkit.frames.family import VectorFamily, mercedes_benz, standard_basis  # noqa: E402
from atomkit.linalg.spaces import LinearMap, PNormSpace  # noqa: E402


@pytest.fixture
def rng():
    """Seeded generator so every test draws the same matrices"""
    return np.random.default_rng(20240611)


@pytest.fixture
def mb_family():
    return mercedes_benz()


@pytest.fixture
def basis3():
    return standard_basis(3)


def random_family(rng, d, M, rank=None, p=2.0, q=2.0):
    """Gaussian atoms of prescribed rank"""
    rank = min(d, M) if rank is None else rank
    atoms = rng.standard_normal((d, rank)) @ rng.standard_normal((rank, M))
    return VectorFamily(PNormSpace(d, p), atoms, q)


def square_map(entries, p=2.0):
    entries = np.asarray(entries, dtype=float)
    space = PNormSpace(entries.shape[0], p)
    return LinearMap(space, space, entries)
