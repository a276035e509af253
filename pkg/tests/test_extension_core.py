import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cnext.extension_core import (DegenerateNodesError, IllConditionedError, chebyshev_nodes, chebyshev_T,
                                  condition_number, lagrange_weights, make_scheme, moment_rhs, optimal_weights,
                                  solve_vandermonde)

# reference condition numbers, rows a = 2, 4, ..., 16 and columns n = 2..9
TABLE1 = {
    2: ["7.0", "26.0", "97", "362", "1351", "5042", "18817", "70226"],
    4: ["3.5", "9.0", "24", "62", "161", "422", "1104", "2889"],
    6: ["2.6", "5.5", "12", "27", "59", "131", "290", "642"],
    8: ["2.1", "4.1", "8", "16", "32", "64", "128", "256"],
    10: ["1.9", "3.3", "6", "11", "21", "39", "73", "135"],
    12: ["1.7", "2.9", "5", "9", "15", "27", "48", "84"],
    14: ["1.6", "2.5", "4", "7", "12", "20", "34", "58"],
    16: ["1.5", "2.3", "4", "6", "10", "16", "26", "43"],
}

# Lagrange weights at 40 digits for the optimal nodes
MP_WEIGHTS = {
    (5, 2.0): [62.7, -105.2911749434976, 74.158048651498612, -54.308825056502397, 44.641951348501388, -20.9],
    (9, 4.0): [358.88888888888889, -640.52143912914382, 488.97904719735865, -358.88888888888889,
               270.58347781179113, -214.43508479134538, 179.44444444444444, -158.37680941284413,
               147.10414165751688, -71.777777777777778],
    (12, 16.0): [32.609178554266691, -51.248385884316809, 31.479128677860701, -19.508080704716716,
                 13.043671421706676, -9.4117685138108058, 7.2464841231703758, -5.8911565550557276,
                 5.016796700656414, -4.4496831310710571, 4.0945206540665983, -3.8988923165367353,
                 1.9181869737803936],
}


def rounded(n, value):
    return "%.1f" % value if n < 4 else "%d" % round(value)


class TestChebyshevT:
    def test_examples(self):
        assert chebyshev_T(0, 0.7) == 1.0
        assert chebyshev_T(2, 2.0) == pytest.approx(7.0, rel=1e-15)
        assert chebyshev_T(8, 1.25) == pytest.approx(128.001953125, rel=1e-14)

    def test_branches_meet_at_one(self):
        for n in range(10):
            inner = chebyshev_T(n, np.nextafter(1.0, 0.0))
            assert abs(inner - chebyshev_T(n, 1.0)) < 1e-12 * n * n + 1e-15

    def test_matches_numpy_polynomial(self):
        x = np.linspace(-3.0, 3.0, 101)
        for n in range(12):
            ref = np.polynomial.chebyshev.chebval(x, [0] * n + [1])
            np.testing.assert_allclose(chebyshev_T(n, x), ref, rtol=1e-11, atol=1e-12)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            chebyshev_T(-1, 0.0)


class TestVandermonde:
    @pytest.mark.parametrize("nodes,rhs,expected", [
        ([0, 1], [1, -1], [2, -1]),
        ([0, 1, 2], [1, -1, 1], [3, -3, 1]),
        ([0, 0.5], [1, 1], [-1, 2]),
    ])
    @pytest.mark.parametrize("method", ["bjorck-pereyra", "lu"])
    def test_hand_solved(self, nodes, rhs, expected, method):
        np.testing.assert_allclose(solve_vandermonde(nodes, rhs, method=method), expected, atol=1e-14)

    def test_duplicate_nodes(self):
        with pytest.raises(DegenerateNodesError, match="degenerate node set"):
            solve_vandermonde([0, 1, 1], [1, -1, 1])

    def test_ill_conditioned_lu(self):
        with pytest.raises(IllConditionedError, match="ill-conditioned beyond solvable range"):
            solve_vandermonde(np.arange(40.0) * 1e3, moment_rhs(39), method="lu")

    def test_overflow(self):
        with pytest.raises(IllConditionedError):
            solve_vandermonde([0.0, 1e-300, 2e-300], [1e300, -1e300, 1e300])

    @given(st.lists(st.floats(0.0, 10.0), min_size=2, max_size=8, unique=True))
    def test_satisfies_system(self, pts):
        t = np.sort(np.array(pts))
        if np.min(np.diff(t)) < 1e-2:
            return
        w = solve_vandermonde(t, moment_rhs(t.size - 1))
        V = np.vander(t, increasing=True).T
        scale = np.abs(V) @ np.abs(w)
        assert np.all(np.abs(V @ w - moment_rhs(t.size - 1)) <= 1e-11 * scale)


class TestLagrange:
    def test_examples(self):
        np.testing.assert_array_equal(lagrange_weights([0]), [1.0])
        np.testing.assert_allclose(lagrange_weights([0, 1, 2]), [3, -3, 1], rtol=1e-15)

    def test_uneven_nodes(self):
        # l_i(-1) by hand: 8/3, -2, 1/3
        np.testing.assert_allclose(lagrange_weights([0, 1, 3]), [8 / 3, -2, 1 / 3], rtol=1e-15)
        np.testing.assert_allclose(solve_vandermonde([0, 1, 3], [1, -1, 1]), [8 / 3, -2, 1 / 3], rtol=1e-14)

    def test_degenerate(self):
        with pytest.raises(DegenerateNodesError):
            lagrange_weights([0, 2, 1])


class TestNodesAndWeights:
    def test_node_examples(self):
        np.testing.assert_allclose(chebyshev_nodes(2, 2.0), [0, 1, 2], atol=1e-15)
        np.testing.assert_array_equal(chebyshev_nodes(1, 5.0), [0, 5])
        c = np.cos(np.pi / 4)
        np.testing.assert_allclose(chebyshev_nodes(4, 2.0), [0, 1 - c, 1, 1 + c, 2], rtol=1e-15)
        np.testing.assert_array_equal(chebyshev_nodes(0, 3.0), [0.0])

    def test_endpoints_exact(self):
        for n in range(1, 20):
            for a in (0.3, 2.0, 7.0):
                t = chebyshev_nodes(n, a)
                assert t[0] == 0.0 and t[-1] == a
                assert np.all(np.diff(t) > 0)

    def test_weight_examples(self):
        np.testing.assert_allclose(optimal_weights(2, 2.0), [3, -3, 1], rtol=1e-14)
        np.testing.assert_allclose(optimal_weights(1, 2.0), [1.5, -0.5], rtol=1e-15)
        assert np.sum(np.abs(optimal_weights(2, 2.0))) == pytest.approx(7.0, rel=1e-14)

    @pytest.mark.parametrize("key", sorted(MP_WEIGHTS))
    def test_high_precision_oracle(self, key):
        n, a = key
        np.testing.assert_allclose(optimal_weights(n, a), MP_WEIGHTS[key], rtol=1e-13)

    @pytest.mark.parametrize("n", range(1, 13))
    @pytest.mark.parametrize("a", [2.0, 4.0, 8.0, 16.0])
    def test_three_routes_agree(self, n, a):
        t = chebyshev_nodes(n, a)
        w_cf = optimal_weights(n, a)
        w_lg = lagrange_weights(t)
        w_vm = solve_vandermonde(t, moment_rhs(n))
        for u, v in ((w_cf, w_lg), (w_cf, w_vm), (w_lg, w_vm)):
            np.testing.assert_allclose(u, v, rtol=1e-10)
        assert np.sum(np.abs(w_cf)) == pytest.approx(condition_number(n, a), rel=1e-12)

    @given(st.integers(1, 14), st.floats(0.1, 50.0))
    def test_sign_alternation(self, n, a):
        w = optimal_weights(n, a)
        assert np.all(np.sign(w) == (-1.0) ** np.arange(n + 1))

    def test_invalid(self):
        with pytest.raises(ValueError):
            optimal_weights(0, 2.0)
        with pytest.raises(ValueError):
            chebyshev_nodes(3, -1.0)
        with pytest.raises(ValueError):
            condition_number(3, 0.0)


class TestConditionNumber:
    def test_examples(self):
        assert condition_number(2, 2.0) == pytest.approx(7.0, rel=1e-15)
        assert round(condition_number(9, 2.0)) == 70226
        assert condition_number(0, 5.0) == 1.0

    @pytest.mark.parametrize("a", sorted(TABLE1))
    def test_table(self, a):
        got = [rounded(n, condition_number(n, float(a))) for n in range(2, 10)]
        assert got == TABLE1[a]

    @pytest.mark.parametrize("n", range(1, 10))
    def test_strictly_decreasing_in_a(self, n):
        vals = [condition_number(n, float(a)) for a in range(2, 17, 2)]
        assert all(x > y for x, y in zip(vals, vals[1:]))


class TestOptimality:
    @pytest.mark.parametrize("n,a", [(3, 2.0), (5, 2.0), (9, 4.0)])
    def test_random_node_sets(self, n, a, rng):
        bound = condition_number(n, a)
        for _ in range(1000):
            inner = np.sort(rng.uniform(0.0, a, n - 1))
            t = np.concatenate([[0.0], inner, [a]])
            if np.min(np.diff(t)) <= 1e-9 * a:
                continue
            assert np.sum(np.abs(lagrange_weights(t))) >= bound - 1e-8

    @given(st.integers(2, 9), st.floats(1.0, 16.0), st.data())
    def test_perturbation_increases_norm(self, n, a, data):
        t = chebyshev_nodes(n, a).copy()
        i = data.draw(st.integers(1, n - 1))
        gap = min(t[i] - t[i - 1], t[i + 1] - t[i])
        t[i] += data.draw(st.sampled_from([-0.3, 0.3])) * gap
        assert np.sum(np.abs(lagrange_weights(t))) > condition_number(n, a)


class TestScheme:
    def test_default(self):
        s = make_scheme(2, 2.0)
        np.testing.assert_allclose(s.t, [0, 1, 2], atol=1e-15)
        np.testing.assert_allclose(s.w, [3, -3, 1], rtol=1e-14)
        assert s.cond == pytest.approx(7.0)

    def test_order_zero(self):
        s = make_scheme(0, 1.0)
        assert s.t.tolist() == [0.0] and s.w.tolist() == [1.0] and s.cond == 1.0

    def test_explicit_nodes(self):
        assert make_scheme(2, 2.0, nodes=[0, 0.5, 2]).cond > 7.0

    def test_explicit_nodes_validation(self):
        with pytest.raises(ValueError):
            make_scheme(2, 2.0, nodes=[0, 1])
        with pytest.raises(ValueError):
            make_scheme(2, 2.0, nodes=[0, 1, 3])

    def test_read_only(self):
        s = make_scheme(3, 2.0)
        with pytest.raises(ValueError):
            s.w[0] = 0.0

    @pytest.mark.parametrize("n", range(0, 13))
    @pytest.mark.parametrize("a", [0.5, 2.0, 4.0, 8.0, 16.0, 20.0])
    def test_moments(self, n, a):
        assert make_scheme(n, a).moment_residual() <= 1e-12

    @pytest.mark.parametrize("n", range(0, 13))
    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    def test_moments_unscaled(self, n, a):
        assert make_scheme(n, a).moment_residual(scaled=False) <= 1e-12
