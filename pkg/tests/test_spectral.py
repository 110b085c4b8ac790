import itertools
import math

import numpy as np
import pytest

from aeq.constructions import moser_spindle, two_simplex_union
from aeq.core import PointSet, matrix_u
from aeq.errors import InvalidInputError, PreconditionError
from aeq.spectral import (
    certify_distance_spectrum,
    cubic_sum_check,
    first_case_sums,
    gershgorin_disks,
    gershgorin_witness_row,
    rank_w_bound,
    same_sign_subset,
    sym_eigenvalues,
    trace_conditions,
    weyl_inequality_check,
)


def random_symmetric(rng, n):
    A = rng.standard_normal((n, n))
    return (A + A.T) / 2


class TestSymEigenvalues:
    def test_identity(self):
        np.testing.assert_allclose(sym_eigenvalues(np.eye(3)).values, [1, 1, 1])

    def test_swap(self):
        np.testing.assert_allclose(sym_eigenvalues([[0, 1], [1, 0]]).values, [-1, 1])

    def test_triangle_v(self):
        np.testing.assert_allclose(sym_eigenvalues(np.ones((3, 3)) - np.eye(3)).values, [-1, -1, 2])

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInputError):
            sym_eigenvalues([[0, np.nan], [np.nan, 0]])

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidInputError):
            sym_eigenvalues([[0, 1], [0, 0]])

    def test_tiny_asymmetry_symmetrized(self):
        M = np.array([[1.0, 2.0], [2.0 + 1e-15, 1.0]])
        np.testing.assert_allclose(sym_eigenvalues(M).values, [-1, 3])

    def test_trace_and_frobenius_consistency(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            M = random_symmetric(rng, int(rng.integers(1, 30)))
            ev = sym_eigenvalues(M).values
            assert np.all(np.diff(ev) >= 0)
            assert abs(ev.sum() - np.trace(M)) <= 1e-10 * max(1.0, np.abs(M).sum())
            fro = np.sum(M * M)
            assert abs(np.sum(ev**2) - fro) <= 1e-10 * fro

    def test_deterministic(self):
        M = random_symmetric(np.random.default_rng(1), 12)
        assert sym_eigenvalues(M).values.tobytes() == sym_eigenvalues(M.copy()).values.tobytes()


class TestCertifyDistanceSpectrum:
    def test_unit_triangle(self, triangle):
        rep = certify_distance_spectrum(triangle)
        assert rep.positive_count_V == 1
        assert rep.above_one_count_U == 0
        assert rep.equal_one_count_U == 0
        assert rep.passed

    def test_collinear_characteristic_roots(self):
        # det(V - mu I) for V=[[0,1,4],[1,0,1],[4,1,0]] is -(mu^3 - 18 mu - 8)
        roots = np.sort(np.roots([1, 0, -18, -8]).real)
        assert np.sum(roots > 0) == 1
        ps = PointSet([[0.0], [1.0], [2.0]])
        rep = certify_distance_spectrum(ps)
        assert rep.positive_count_V == 1
        np.testing.assert_allclose(sym_eigenvalues([[0, 1, 4], [1, 0, 1], [4, 1, 0]]).values, roots, atol=1e-12)

    def test_random_20_points_r3(self):
        rng = np.random.default_rng(7)
        rep = certify_distance_spectrum(PointSet(rng.standard_normal((20, 3))))
        assert rep.positive_count_V == 1
        assert rep.above_one_count_U <= 1
        assert rep.equal_one_count_U >= 15
        assert rep.rank_W <= 5

    def test_json_fields(self, square):
        data = certify_distance_spectrum(square).to_dict()
        assert list(data) == [
            "n", "d", "positive_count_V", "above_one_count_U", "equal_one_count_U",
            "trace_U", "trace_U_cubed", "rank_W", "lambda_max_U", "checks",
        ]
        assert set(data["checks"][0]) == {"name", "pass", "margin"}

    def test_pass_flags_follow_margins(self):
        rng = np.random.default_rng(2)
        rep = certify_distance_spectrum(PointSet(rng.standard_normal((12, 4))))
        for c in rep.checks:
            assert c.passed == (c.margin >= 0)


class TestTraceConditions:
    def test_triangle(self, triangle):
        rep = trace_conditions(triangle)
        assert rep.trace_U == 0 and rep.trace_U_cubed == 0 and rep.passed

    def test_square(self, square):
        # U is a perfect-matching adjacency M with M^3 = M, zero diagonal
        rep = trace_conditions(square)
        assert rep.trace_U_cubed == 0 and rep.passed

    def test_moser(self):
        rep = trace_conditions(moser_spindle())
        assert rep.trace_U == 0.0
        assert abs(rep.trace_U_cubed) <= rep.bound and rep.passed

    def test_requires_almost_equidistant(self, collinear_024):
        with pytest.raises(PreconditionError) as exc:
            trace_conditions(collinear_024)
        assert exc.value.witness == (0, 1, 2)

    def test_snapping_matters(self):
        # unit triangle perturbed by 1e-10: unsnapped U^3 trace is tiny but nonzero
        pts = np.array([[0, 0], [1 + 1e-10, 0], [0.5, math.sqrt(3) / 2]])
        assert trace_conditions(pts).trace_U_cubed == 0.0


class TestGershgorin:
    def test_two_by_two(self):
        res = gershgorin_disks([[2, 1], [1, 2]])
        assert [(d.center, d.radius) for d in res.disks] == [(2, 1), (2, 1)]
        np.testing.assert_allclose(res.eigenvalues, [1, 3])
        assert res.contained

    def test_diagonal(self):
        res = gershgorin_disks(np.diag([3.0, -1.0, 2.0]))
        assert all(d.radius == 0 for d in res.disks)
        np.testing.assert_allclose(res.eigenvalues, [-1, 2, 3])
        assert res.contained

    def test_square_u(self, square):
        res = gershgorin_disks(matrix_u(square))
        assert all(d.center == 0 and d.radius == 1 for d in res.disks)
        np.testing.assert_allclose(res.eigenvalues, [-1, -1, 1, 1], atol=1e-14)
        assert res.contained

    def test_containment_random(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            assert gershgorin_disks(random_symmetric(rng, int(rng.integers(1, 15)))).contained

    def test_witness_row_collinear(self):
        U = matrix_u(PointSet([[0.0], [1.0], [2.0]]))
        np.testing.assert_array_equal(U, [[0, 0, 3], [0, 0, 0], [3, 0, 0]])
        lam = sym_eigenvalues(U).values[-1]
        assert lam == pytest.approx(3)
        assert gershgorin_witness_row(U, lam) == (0, 3.0)

    def test_witness_row_zero(self):
        assert gershgorin_witness_row(np.zeros((3, 3)), 0.0) == (0, 0.0)

    def test_witness_row_square(self, square):
        assert gershgorin_witness_row(matrix_u(square), 1.0) == (0, 1.0)

    def test_witness_row_not_eigenvalue(self, square):
        with pytest.raises(InvalidInputError):
            gershgorin_witness_row(matrix_u(square), 5.0)

    def test_witness_row_top_eigenvalue_random(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            U = matrix_u(rng.uniform(0, 2, (int(rng.integers(2, 15)), 3)))
            lam = sym_eigenvalues(U).values[-1]
            k, total = gershgorin_witness_row(U, lam)
            assert total >= lam - 1e-7 * max(lam, 1)


def brute_same_sign(values, t):
    """All same-sign subsets of size <= t of the 2t largest-magnitude values."""
    top = sorted(range(len(values)), key=lambda i: (-abs(values[i]), i))[: 2 * t]
    best = 0.0
    for size in range(1, t + 1):
        for J in itertools.combinations(top, size):
            signs = {np.sign(values[j]) for j in J}
            if len(signs) == 1 and 0 not in signs:
                best = max(best, abs(sum(values[j] for j in J)))
    return best


class TestSameSignSubset:
    def test_all_zero(self):
        assert same_sign_subset([0.0] * 8, 4) is None

    def test_single(self):
        assert same_sign_subset([3, 0, 0, 0], 1) == [0]

    def test_greedy_trace(self):
        assert same_sign_subset([1.2, 1.2, -0.1, 0, 0], 2) == [0, 1]

    def test_negative_class(self):
        assert same_sign_subset([0.5, -2.0, -2.0, 0.1], 2) == [1, 2]

    def test_matches_brute_force(self):
        rng = np.random.default_rng(9)
        for _ in range(500):
            t = int(rng.integers(1, 5))
            vals = list(np.round(rng.normal(0, 1.5, int(rng.integers(1, 12))), 2))
            J = same_sign_subset(vals, t)
            exists = brute_same_sign(vals, t) > math.sqrt(t)
            assert (J is not None) == exists
            if J is not None:
                assert len(J) <= t
                assert len({np.sign(vals[j]) for j in J}) == 1
                assert abs(sum(vals[j] for j in J)) > math.sqrt(t)

    def test_premise_guarantees_subset(self):
        # top-2t absolute sum > 3 sqrt(t) always yields a subset
        rng = np.random.default_rng(10)
        hits = 0
        for _ in range(2000):
            t = int(rng.integers(1, 6))
            vals = rng.normal(0, 2, 2 * t + 3)
            top = sorted(np.abs(vals))[::-1][: 2 * t]
            if sum(top) > 3 * math.sqrt(t):
                hits += 1
                assert same_sign_subset(vals, t) is not None
        assert hits > 100


class TestWeyl:
    def test_identities(self):
        v = weyl_inequality_check(np.eye(3), np.eye(3))
        assert v.ok and v.worst_margin == pytest.approx(0, abs=1e-14)

    def test_complementary_diagonals(self):
        assert weyl_inequality_check(np.diag([0.0, 1.0]), np.diag([1.0, 0.0])).ok

    def test_random_pairs(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            n = int(rng.integers(1, 11))
            assert weyl_inequality_check(random_symmetric(rng, n), random_symmetric(rng, n)).ok

    def test_size_mismatch(self):
        with pytest.raises(InvalidInputError):
            weyl_inequality_check(np.eye(2), np.eye(3))


class TestRankW:
    def test_triangle(self, triangle):
        rep = rank_w_bound(triangle)
        assert rep.rank == 3 and rep.bound == 4 and rep.ok and rep.one_positive_ok

    def test_unit_pair(self):
        rep = rank_w_bound(PointSet([[0.0], [1.0]]))
        assert rep.rank == 2 and rep.bound == 3 and rep.ok

    def test_random_planar(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            rep = rank_w_bound(PointSet(rng.standard_normal((8, 2))))
            assert rep.rank <= 4 and rep.ok and rep.one_positive_ok


class TestCubicSum:
    def test_examples(self):
        v = cubic_sum_check([1, 1, 1], 1)
        assert v.applicable and v.holds and v.l == 0 and v.cube_sum == 3
        v = cubic_sum_check([-1, 4], 1)
        assert v.l == 1 and v.cube_sum == 63 and v.bound == 5 and v.holds
        v = cubic_sum_check([-1, 3], 1)
        assert v.l == 0 and v.cube_sum == 26 and v.bound == 2 and v.holds

    def test_not_applicable(self):
        assert not cubic_sum_check([-2, 5], 1).applicable
        assert not cubic_sum_check([0.1, 0.1], 1).applicable
        assert cubic_sum_check([-2, 5], 1).holds is None

    def test_rejects_nonpositive_y(self):
        with pytest.raises(InvalidInputError):
            cubic_sum_check([1], 0)


class TestFirstCaseSums:
    def test_triangle(self, triangle):
        rep = first_case_sums(triangle)
        assert rep.k == 3 and rep.target == 0 and rep.sum_neg == 0 and rep.passed

    def test_square(self, square):
        rep = first_case_sums(square)
        assert rep.k == 2 and rep.target == 2
        assert rep.sum_neg == pytest.approx(2) and rep.sum_neg_cubed == pytest.approx(2)
        assert rep.passed

    def test_unit_pair(self):
        rep = first_case_sums(PointSet([[0.0], [1.0]]))
        assert rep.k == 2 and rep.sum_neg == 0 and rep.target == 0 and rep.passed

    def test_rejects_second_case(self):
        with pytest.raises(PreconditionError, match="above 1"):
            first_case_sums(moser_spindle())

    def test_rejects_non_ae(self, collinear_024):
        with pytest.raises(PreconditionError, match="almost-equidistant"):
            first_case_sums(collinear_024)

    def test_two_simplex_unions_where_applicable(self):
        seen = 0
        for d in range(2, 8):
            for seed in range(5):
                ps = two_simplex_union(d, seed)
                try:
                    rep = first_case_sums(ps)
                except PreconditionError:
                    continue
                seen += 1
                assert rep.passed
                assert rep.target <= rep.k  # n <= 2k in the first case
        assert seen > 0


def test_cubic_sum_random_draws():
    rng = np.random.default_rng(14)
    applicable = 0
    for _ in range(10_000):
        m = int(rng.integers(1, 11))
        y = float(rng.uniform(0.1, 3))
        xs = rng.uniform(-y, 10 * y, m)
        v = cubic_sum_check(xs, y)
        if v.applicable:
            applicable += 1
            assert v.holds, (xs, y)
    assert applicable > 5000


def test_snapping_matches_unit_graph():
    # |d - 1| = 8e-7 is unit at 1e-6, but |d^2 - 1| is about 1.6e-6
    from aeq.spectral import snapped_u

    U = snapped_u([[0.0], [1.0 + 8e-7], [3.0]], 1e-6)
    assert U[0, 1] == 0.0 and U[1, 0] == 0.0
    assert U[0, 2] == 8.0
