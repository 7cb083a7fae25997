"""
Tests for the linear-algebra core: spaces, norms, inverses and factorization
"""
import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from atomkit.errors import ComplementMismatchError, DimensionMismatchError, InclusionFailureError, ValidationAtomkitError
from atomkit.linalg import (
    INF,
    ComplementPair,
    LinearMap,
    PNormSpace,
    adjoint,
    compose,
    conjugate_exponent,
    douglas_factor,
    factor_residual,
    generalized_inverse,
    lower_homogeneous_bound,
    moore_penrose,
    norm_domination,
    operator_norm,
    parse_exponent,
    projection_checks,
    range_inclusion,
    vector_norm,
)
from atomkit.linalg.spaces import spectral_norm
from atomkit.linalg.subspaces import kernel_basis, range_basis

from conftest import square_map

matrix_shapes = st.tuples(
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=1, max_value=20),
    st.integers(min_value=0, max_value=2**32 - 1),
)


def _random_rank(shape_seed):
    rows, cols, draw_seed = shape_seed
    rng = np.random.default_rng(draw_seed)
    rank = int(rng.integers(0, min(rows, cols) + 1))
    return rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, cols))


def _oblique(rng, onto):
    """Projection onto span(onto) along a random complement"""
    d, k = onto.shape
    if k == 0:
        return np.zeros((d, d))
    if k == d:
        return np.eye(d)
    Z = np.hstack([onto, rng.standard_normal((d, d - k))])
    D = np.diag([1.0] * k + [0.0] * (d - k))
    return Z @ D @ np.linalg.inv(Z)


class TestSpaces:
    """Exponents, vector norms and map algebra"""

    def test_parse_exponent_accepts_inf_string(self):
        assert parse_exponent("inf") == INF
        assert parse_exponent(3) == 3.0

    def test_parse_exponent_rejects_below_one(self):
        with pytest.raises(ValidationAtomkitError):
            parse_exponent(0.5)

    def test_conjugate_exponent_pairs_one_and_inf(self):
        assert conjugate_exponent(1.0) == INF
        assert conjugate_exponent(INF) == 1.0
        assert conjugate_exponent(2.0) == 2.0
        assert conjugate_exponent(3.0) == pytest.approx(1.5)

    @pytest.mark.parametrize("p", [1.5, 3.0, 4.0, 1.25])
    def test_conjugate_is_involution(self, p):
        assert conjugate_exponent(conjugate_exponent(p)) == p

    @pytest.mark.parametrize(
        "p, v, expected",
        [(2.0, [3, 4], 5.0), (1.0, [1, -1, 1], 3.0), (INF, [0.2, -7, 3], 7.0)],
    )
    def test_vector_norm_examples(self, p, v, expected):
        assert vector_norm(PNormSpace(len(v), p), v) == pytest.approx(expected)

    def test_vector_norm_rejects_wrong_length(self):
        with pytest.raises(DimensionMismatchError):
            vector_norm(PNormSpace(3), [1.0, 2.0])

    def test_map_shape_must_match_spaces(self):
        with pytest.raises(DimensionMismatchError):
            LinearMap(PNormSpace(2), PNormSpace(3), np.zeros((2, 2)))

    def test_adjoint_reverses_composition(self, rng):
        A = LinearMap.from_matrix(rng.standard_normal((3, 4)), 1.5, 3.0)
        B = LinearMap.from_matrix(rng.standard_normal((4, 2)), 2.0, 1.5)
        left = adjoint(compose(A, B))
        right = compose(adjoint(B), adjoint(A))
        assert left.domain == right.domain and left.codomain == right.codomain
        np.testing.assert_allclose(left.entries, right.entries, rtol=0, atol=1e-14)

    def test_adjoint_uses_dual_exponents(self):
        A = LinearMap.from_matrix(np.eye(2), 1.0, 3.0)
        assert adjoint(A).domain.p == pytest.approx(1.5)
        assert adjoint(A).codomain.p == INF


class TestOperatorNorm:
    """Exact paths and certified sandwiches"""

    def test_identity_is_exactly_one(self):
        est = operator_norm(LinearMap.identity(PNormSpace(3)))
        assert est.exact
        assert est.lower == est.upper == pytest.approx(1.0)

    def test_rank_one_spectral_norm(self):
        est = operator_norm(LinearMap.from_matrix([[1, 2], [2, 4]]))
        assert est.exact
        assert est.upper == pytest.approx(5.0)

    def test_column_formula_for_l1_domain(self):
        est = operator_norm(LinearMap.from_matrix([[1, 0], [0, -3]], 1.0, 2.0))
        assert est.exact
        assert est.upper == pytest.approx(3.0)

    def test_row_formula_for_linf_codomain(self):
        est = operator_norm(LinearMap.from_matrix([[1, -2], [0.5, 0.5]], INF, INF))
        assert est.exact
        assert est.upper == pytest.approx(3.0)

    @pytest.mark.parametrize("p, q", [(1.5, 3.0), (3.0, 1.5), (INF, 2.0), (2.0, 1.0)])
    def test_sandwich_contains_every_sampled_ratio(self, rng, p, q):
        A = LinearMap.from_matrix(rng.standard_normal((4, 3)), p, q)
        est = operator_norm(A, samples=64)
        assert est.lower <= est.upper
        for _ in range(200):
            u = rng.standard_normal(3)
            ratio = np.linalg.norm(A.entries @ u, ord=q) / np.linalg.norm(u, ord=p)
            assert ratio <= est.upper + 1e-12

    def test_zero_map(self):
        est = operator_norm(LinearMap.from_matrix(np.zeros((2, 3)), 3.0, 1.5))
        assert est.exact and est.upper == 0.0


class TestLowerHomogeneousBound:
    """inf ||Ax|| over the unit sphere"""

    def test_identity(self):
        est = lower_homogeneous_bound(LinearMap.identity(PNormSpace(3)))
        assert est.exact and est.upper == pytest.approx(1.0)

    def test_rank_deficient_is_exactly_zero(self):
        est = lower_homogeneous_bound(LinearMap.from_matrix([[1, 2], [2, 4]], 3.0, 1.5))
        assert est.exact and est.upper == 0.0

    def test_diagonal_smallest_singular_value(self):
        est = lower_homogeneous_bound(LinearMap.from_matrix(np.diag([1.0, 3.0])))
        assert est.exact and est.upper == pytest.approx(1.0)

    @pytest.mark.parametrize("p, q", [(1.5, 3.0), (INF, 1.0), (1.0, 2.0)])
    def test_every_sample_sits_above_lower(self, rng, p, q):
        A = LinearMap.from_matrix(rng.standard_normal((5, 3)), p, q)
        est = lower_homogeneous_bound(A, samples=64)
        for _ in range(200):
            u = rng.standard_normal(3)
            ratio = np.linalg.norm(A.entries @ u, ord=q) / np.linalg.norm(u, ord=p)
            assert ratio >= est.lower - 1e-12


class TestMoorePenrose:
    """Penrose identities and fixed examples"""

    @pytest.mark.parametrize(
        "A, expected",
        [
            (np.eye(2), np.eye(2)),
            ([[1, 0], [0, 0]], [[1, 0], [0, 0]]),
            ([[1, 2], [2, 4]], [[0.04, 0.08], [0.08, 0.16]]),
        ],
    )
    def test_examples(self, A, expected):
        G = moore_penrose(LinearMap.from_matrix(A))
        np.testing.assert_allclose(G.entries, expected, atol=1e-12)

    @seed(1)
    @settings(max_examples=200, deadline=None)
    @given(matrix_shapes)
    def test_penrose_identities(self, shape_seed):
        a = _random_rank(shape_seed)
        g = moore_penrose(LinearMap.from_matrix(a)).entries
        scale = max(1.0, spectral_norm(a)) ** 2 * max(1.0, spectral_norm(g)) ** 2
        assert spectral_norm(a @ g @ a - a) <= 1e-10 * scale
        assert spectral_norm(g @ a @ g - g) <= 1e-10 * scale
        assert spectral_norm(a @ g - (a @ g).T) <= 1e-10 * scale
        assert spectral_norm(g @ a - (g @ a).T) <= 1e-10 * scale

    @seed(2)
    @settings(max_examples=50, deadline=None)
    @given(matrix_shapes)
    def test_inverse_of_inverse(self, shape_seed):
        a = _random_rank(shape_seed)
        # keep conditioning moderate so the double inversion stays within 1e-9
        u, s, vt = np.linalg.svd(a, full_matrices=False)
        a = u @ np.diag(np.where(s > 1e-8 * max(s.max(initial=0), 1.0), 1.0 + s, 0.0)) @ vt
        back = moore_penrose(moore_penrose(LinearMap.from_matrix(a)))
        np.testing.assert_allclose(back.entries, a, atol=1e-9)

    def test_projection_checks_on_pinv(self, rng):
        T = LinearMap.from_matrix(rng.standard_normal((3, 2)) @ rng.standard_normal((2, 5)))
        assert projection_checks(T).passed

    def test_projection_checks_zero(self):
        T = LinearMap.from_matrix(np.zeros((2, 3)))
        assert projection_checks(T, LinearMap.from_matrix(np.zeros((3, 2)))).passed

    def test_projection_checks_inverse(self):
        t = np.array([[2.0, 1.0], [1.0, 1.0]])
        report = projection_checks(LinearMap.from_matrix(t), LinearMap.from_matrix(np.linalg.inv(t)))
        assert report.passed


class TestGeneralizedInverse:
    """G A = I - P and A G = Q for complement pairs"""

    def test_invertible_gives_inverse(self):
        a = np.array([[2.0, 1.0], [1.0, 3.0]])
        A = LinearMap.from_matrix(a)
        pair = ComplementPair(square_map(np.zeros((2, 2))), square_map(np.eye(2)))
        np.testing.assert_allclose(generalized_inverse(A, pair).entries, np.linalg.inv(a), atol=1e-12)

    def test_orthogonal_pair_gives_moore_penrose(self, rng):
        A = LinearMap.from_matrix(rng.standard_normal((4, 2)) @ rng.standard_normal((2, 3)))
        G = generalized_inverse(A, ComplementPair.orthogonal(A))
        np.testing.assert_allclose(G.entries, moore_penrose(A).entries, atol=1e-10)

    def test_oblique_example(self):
        A = LinearMap.from_matrix([[1, 0], [0, 0]])
        # onto span(e2) along span(e1 + e2)
        P = square_map([[0, 0], [-1, 1]])
        Q = square_map([[1, 0], [0, 0]])
        G = generalized_inverse(A, ComplementPair(P, Q)).entries
        np.testing.assert_allclose(G, [[1, 0], [1, 0]], atol=1e-12)
        np.testing.assert_allclose(G @ A.entries, np.eye(2) - P.entries, atol=1e-12)
        np.testing.assert_allclose(A.entries @ G, Q.entries, atol=1e-12)

    def test_projection_that_misses_kernel_is_rejected(self):
        A = LinearMap.from_matrix([[1, 0], [0, 0]])
        P = square_map([[0, -1], [0, 1]])
        Q = square_map([[1, 0], [0, 0]])
        with pytest.raises(ComplementMismatchError) as exc_info:
            generalized_inverse(A, ComplementPair(P, Q))
        assert exc_info.value.details["identity"] == "A∘P = 0"

    def test_non_idempotent_pair_is_rejected(self):
        with pytest.raises(ComplementMismatchError):
            ComplementPair(square_map([[1, 1], [0, 1]]), square_map(np.eye(2)))

    @seed(3)
    @settings(max_examples=100, deadline=None)
    @given(matrix_shapes)
    def test_contract_identities_for_random_oblique_pairs(self, shape_seed):
        a = _random_rank(shape_seed)
        rng = np.random.default_rng(shape_seed[2] + 1)
        P = _oblique(rng, kernel_basis(a))
        Q = _oblique(rng, range_basis(a))
        # oblique complements can be arbitrarily skewed; keep the well-posed draws
        if max(spectral_norm(P), spectral_norm(Q)) > 1e3:
            return
        A = LinearMap.from_matrix(a)
        G = generalized_inverse(A, ComplementPair(square_map(P), square_map(Q))).entries
        scale = max(1.0, spectral_norm(a), spectral_norm(G)) ** 2
        n = a.shape[1]
        assert spectral_norm(a @ G @ a - a) <= 1e-9 * scale
        assert spectral_norm(G @ a @ G - G) <= 1e-9 * scale
        assert spectral_norm(G @ a - (np.eye(n) - P)) <= 1e-9 * scale
        assert spectral_norm(a @ G - Q) <= 1e-9 * scale


class TestRangeInclusionAndFactorization:
    """Range inclusion, norm domination and Douglas factorization"""

    def test_range_of_itself(self, rng):
        A = LinearMap.from_matrix(rng.standard_normal((3, 4)))
        result = range_inclusion(A, A)
        assert result.holds and result.residual <= 1e-12

    def test_identity_not_in_rank_one_range(self):
        result = range_inclusion(LinearMap.from_matrix(np.eye(2)), LinearMap.from_matrix([[1], [0]]))
        assert not result.holds

    def test_product_range_is_contained(self, rng):
        a = rng.standard_normal((4, 2))
        B = LinearMap.from_matrix(a @ rng.standard_normal((2, 6)))
        assert range_inclusion(B, LinearMap.from_matrix(a))

    def test_codomain_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            range_inclusion(LinearMap.from_matrix(np.eye(2)), LinearMap.from_matrix(np.eye(3)))

    def test_douglas_factor_of_itself(self, rng):
        t = rng.standard_normal((3, 5))
        V = douglas_factor(LinearMap.from_matrix(t), LinearMap.from_matrix(t)).entries
        np.testing.assert_allclose(V @ t, t, atol=1e-10)

    def test_douglas_factor_of_zero(self, rng):
        T = LinearMap.from_matrix(rng.standard_normal((3, 5)))
        V = douglas_factor(LinearMap.from_matrix(np.zeros((2, 5))), T)
        np.testing.assert_allclose(V.entries, 0.0)

    def test_douglas_factor_constructive(self, rng):
        t = rng.standard_normal((3, 5))
        s = rng.standard_normal((2, 3)) @ t
        V = douglas_factor(LinearMap.from_matrix(s), LinearMap.from_matrix(t)).entries
        assert spectral_norm(V @ t - s) <= 1e-10 * max(1.0, spectral_norm(s))

    def test_douglas_factor_failure(self):
        with pytest.raises(InclusionFailureError):
            douglas_factor(LinearMap.from_matrix(np.eye(2)), LinearMap.from_matrix([[1, 0]]))

    def test_norm_domination_infinite_on_kernel_leak(self):
        k = norm_domination(LinearMap.from_matrix(np.eye(2)), LinearMap.from_matrix([[1, 0]]))
        assert math.isinf(k)

    @seed(4)
    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=1, max_value=6),
        st.booleans(),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_three_douglas_views_agree(self, rows_s, rows_t, cols, factorable, draw_seed):
        rng = np.random.default_rng(draw_seed)
        rank = int(rng.integers(0, min(rows_t, cols) + 1))
        t = rng.standard_normal((rows_t, rank)) @ rng.standard_normal((rank, cols))
        if factorable:
            s = rng.standard_normal((rows_s, rows_t)) @ t
        else:
            s = rng.standard_normal((rows_s, cols))
        S, T = LinearMap.from_matrix(s), LinearMap.from_matrix(t)
        tol = 1e-9
        inclusion = bool(range_inclusion(adjoint(S), adjoint(T), tol))
        residual_ok = factor_residual(S, T) <= tol * max(1.0, spectral_norm(s))
        try:
            douglas_factor(S, T, tol)
            factored = True
        except InclusionFailureError:
            factored = False
        assert inclusion == residual_ok == factored
