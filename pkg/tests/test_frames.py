"""
Tests for vector families, synthesis/analysis operators and frame constants
"""
import math

import numpy as np
import pytest

from atomkit.errors import DimensionMismatchError, ValidationAtomkitError
from atomkit.frames import (
    VectorFamily,
    analysis_operator,
    bessel_bound,
    canonical_dual,
    dual_analysis,
    frame_bounds,
    frame_operator,
    is_tight,
    kframe_bounds,
    shift_family,
    standard_basis,
    synthesis_operator,
)
from atomkit.linalg.spaces import INF, LinearMap, PNormSpace

from conftest import random_family, square_map


class TestFamilies:
    def test_from_vectors_stores_columns(self):
        F = VectorFamily.from_vectors([[1, 0], [0, 1], [1, 1]])
        assert F.M == 3
        np.testing.assert_array_equal(F.atom(3), [1.0, 1.0])

    def test_atoms_must_fit_space(self):
        with pytest.raises(DimensionMismatchError):
            VectorFamily(PNormSpace(3), np.eye(2))

    def test_shift_family_atoms(self):
        F = shift_family(5)
        assert F.space.p == 1.0 and F.q == 1.0
        np.testing.assert_array_equal(F.atoms, np.eye(5)[:, 1:])

    def test_shift_family_needs_two_dimensions(self):
        with pytest.raises(ValidationAtomkitError):
            shift_family(1)


class TestOperators:
    """Synthesis, analysis and the dual analysis map"""

    def test_synthesis_of_standard_basis(self):
        np.testing.assert_array_equal(synthesis_operator(standard_basis(2)).entries, np.eye(2))

    def test_synthesis_matrix(self):
        T = synthesis_operator(VectorFamily.from_vectors([[1, 0], [0, 1], [1, 1]]))
        np.testing.assert_array_equal(T.entries, [[1, 0, 1], [0, 1, 1]])

    def test_analysis_is_adjoint(self):
        F = VectorFamily.from_vectors([[1, 0, 2], [0, 1, 1]], p=3.0, q=1.5)
        A = analysis_operator(F)
        assert A.domain.p == pytest.approx(1.5)
        assert A.codomain.p == pytest.approx(3.0)
        np.testing.assert_array_equal(A.entries, F.atoms.T)

    def test_dual_analysis(self):
        assert dual_analysis(standard_basis(2), [2.0, -1.0]).tolist() == [2.0, -1.0]
        assert not np.any(dual_analysis(standard_basis(3), np.zeros(3)))

    def test_dual_analysis_dimension(self):
        with pytest.raises(DimensionMismatchError):
            dual_analysis(standard_basis(3), [1.0, 2.0])


class TestFrameBounds:
    """Frame constants in norm form"""

    def test_standard_basis(self):
        bounds = frame_bounds(standard_basis(3))
        assert bounds.onto
        assert bounds.A.upper == pytest.approx(1.0)
        assert bounds.B.upper == pytest.approx(1.0)

    def test_bessel_bound_scales(self, rng):
        F = random_family(rng, 3, 5)
        assert bessel_bound(F.scaled(3.0)).upper == pytest.approx(3.0 * bessel_bound(F).upper)

    @pytest.mark.parametrize("d", [5, 10, 50])
    def test_shift_family_is_bessel_but_not_a_frame(self, d):
        bounds = frame_bounds(shift_family(d))
        assert bounds.B.exact and bounds.B.upper == 1.0
        assert bounds.A.exact and bounds.A.upper == 0.0
        assert not bounds.onto

    def test_mercedes_benz_is_tight(self, mb_family):
        bounds = frame_bounds(mb_family)
        assert bounds.A.upper == pytest.approx(math.sqrt(1.5), abs=1e-10)
        assert bounds.B.upper == pytest.approx(math.sqrt(1.5), abs=1e-10)
        squared = bounds.squared()
        assert squared.A.upper == pytest.approx(1.5, abs=1e-10)
        assert squared.B.upper == pytest.approx(1.5, abs=1e-10)
        assert is_tight(mb_family)

    def test_random_family_is_not_tight(self, rng):
        assert not is_tight(VectorFamily(PNormSpace(2), np.array([[1.0, 0.0], [0.0, 3.0]])))

    def test_non_hilbert_sandwich_is_consistent(self, rng):
        F = random_family(rng, 3, 6, p=INF, q=1.5)
        bounds = frame_bounds(F)
        assert bounds.onto and bounds.A.lower > 0
        assert bounds.A.lower <= bounds.B.upper

    @pytest.mark.parametrize("draw_seed", range(100))
    def test_hilbert_bounds_are_extreme_singular_values(self, draw_seed):
        rng = np.random.default_rng(draw_seed)
        d = int(rng.integers(1, 5))
        F = random_family(rng, d, d + int(rng.integers(0, 5)))
        singular = np.linalg.svd(F.atoms, compute_uv=False)
        bounds = frame_bounds(F)
        assert bounds.A.lower == pytest.approx(singular[-1], abs=1e-8)
        assert bounds.A.upper == pytest.approx(singular[-1], abs=1e-8)
        assert bounds.B.upper == pytest.approx(singular[0], abs=1e-8)

    @pytest.mark.parametrize("c", [0.5, -2.0, 3.0])
    def test_lower_bound_scales(self, rng, c):
        F = random_family(rng, 3, 5)
        assert frame_bounds(F.scaled(c)).A.upper == pytest.approx(abs(c) * frame_bounds(F).A.upper, rel=1e-10)


class TestHilbertFrames:
    def test_frame_operator_of_mercedes_benz(self, mb_family):
        np.testing.assert_allclose(frame_operator(mb_family).entries, 1.5 * np.eye(2), atol=1e-12)

    def test_canonical_dual_reconstructs(self, rng):
        F = random_family(rng, 3, 6)
        G = canonical_dual(F)
        x = rng.standard_normal(3)
        np.testing.assert_allclose(F.atoms @ (G.atoms.T @ x), x, atol=1e-10)

    def test_canonical_dual_needs_frame(self):
        with pytest.raises(ValidationAtomkitError):
            canonical_dual(VectorFamily(PNormSpace(2), np.array([[1.0], [0.0]])))

    def test_frame_operator_rejects_banach_exponents(self):
        with pytest.raises(ValidationAtomkitError):
            frame_operator(standard_basis(2, p=1.0))


class TestKFrames:
    """A ||K* x||^2 <= sum |<x, x_n>|^2 <= B ||x||^2"""

    def test_identity_on_standard_basis(self):
        bounds = kframe_bounds(standard_basis(3), LinearMap.identity(PNormSpace(3)))
        assert bounds.A.upper == pytest.approx(1.0)
        assert bounds.B.upper == pytest.approx(1.0)
        assert bounds.is_kframe

    def test_projection_onto_first_axis(self):
        F = VectorFamily(PNormSpace(2), np.array([[1.0], [0.0]]))
        bounds = kframe_bounds(F, square_map([[1, 0], [0, 0]]))
        assert bounds.A.upper == pytest.approx(1.0)
        assert bounds.B.upper == pytest.approx(1.0)

    def test_zero_operator_is_vacuous(self, rng):
        bounds = kframe_bounds(random_family(rng, 3, 4), square_map(np.zeros((3, 3))))
        assert bounds.unbounded_lower and bounds.is_kframe

    def test_range_outside_synthesis(self):
        F = VectorFamily(PNormSpace(2), np.array([[1.0], [0.0]]))
        bounds = kframe_bounds(F, LinearMap.identity(PNormSpace(2)))
        assert bounds.A.upper == 0.0
        assert not bounds.is_kframe

    def test_inequality_holds_on_samples(self, rng):
        F = random_family(rng, 3, 5, rank=2)
        K = square_map(F.atoms @ rng.standard_normal((5, 3)))
        bounds = kframe_bounds(F, K)
        for _ in range(100):
            x = rng.standard_normal(3)
            coeffs = np.sum((F.atoms.T @ x) ** 2)
            assert bounds.A.lower * np.sum((K.entries.T @ x) ** 2) <= coeffs * (1 + 1e-10) + 1e-12
            assert coeffs <= bounds.B.upper * np.sum(x**2) * (1 + 1e-10)
