import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from nlshare.capacity import (
    capacity,
    conservative_capacity_bound,
    critical_bisection,
    critical_sequence,
    initial_threshold,
    next_critical,
    relaxed_next,
    required_parties,
)


class TestInitialThreshold:
    def test_m3_asymmetric_bilocal(self):
        assert initial_threshold(3, 2, "asym") == pytest.approx(0.5926, abs=1e-4)
        assert initial_threshold(3, 2, "asym") == pytest.approx((4 / (3 * math.sqrt(3))) ** 2)

    @pytest.mark.parametrize("n", [2, 3, 7])
    def test_m3_symmetric_independent_of_n(self, n):
        assert initial_threshold(3, n, "sym") == pytest.approx(4 / (3 * math.sqrt(3)))
        assert initial_threshold(3, n, "sym") == pytest.approx(0.7698, abs=1e-4)

    def test_m4_symmetric(self):
        assert initial_threshold(4, 2, "sym") == pytest.approx(6 / (4 * math.sqrt(2 + math.sqrt(2))))
        assert initial_threshold(4, 2, "sym") == pytest.approx(0.8118, abs=1e-4)


class TestRecursionMap:
    @given(st.floats(1e-6, 1 - 1e-9))
    def test_grows_and_is_increasing(self, lam):
        assert next_critical(lam) > lam
        assert next_critical(min(1.0, lam + 1e-6)) > next_critical(lam)
        # relaxed map is looser
        assert relaxed_next(lam) >= next_critical(lam) - 1e-15

    def test_sharp_endpoint(self):
        assert next_critical(1.0) == 2.0


class TestCriticalSequence:
    def test_m3_asymmetric(self):
        res = critical_sequence(3, 2, "asym")
        assert res.k_max == 4
        assert_allclose(res.critical_lambdas, [0.59, 0.66, 0.75, 0.90], atol=0.01)
        assert res.first_infeasible_lambda == pytest.approx(1.25, abs=0.01)

    def test_m3_symmetric(self):
        res = critical_sequence(3, 2, "sym")
        assert_allclose(res.critical_lambdas, [0.76980, 0.93974], atol=1e-4)
        assert res.first_infeasible_lambda > 1
        # the exact recursion gives 1.4007 here, not 1.374
        assert res.first_infeasible_lambda == pytest.approx(1.4007, abs=1e-4)

    def test_m4_asymmetric(self):
        res = critical_sequence(4, 2, "asym")
        assert_allclose(res.critical_lambdas, [0.6590, 0.7522, 0.9069], atol=1e-4)
        assert res.first_infeasible_lambda == pytest.approx(1.27, abs=0.01)

    def test_strictly_increasing_and_bounded(self):
        for m in range(2, 7):
            for n in range(2, 7):
                for mode in ("sym", "asym"):
                    res = critical_sequence(m, n, mode)
                    lams = res.critical_lambdas
                    assert all(a < b for a, b in zip(lams, lams[1:]))
                    assert all(x <= 1 for x in lams)
                    assert res.first_infeasible_lambda > 1

    def test_k_limit_is_a_hard_error(self):
        with pytest.raises(RuntimeError):
            critical_sequence(3, 3, "asym", k_limit=3)

    def test_bad_limit(self):
        with pytest.raises(ValueError):
            critical_sequence(3, 3, "asym", k_limit=0)


class TestCapacity:
    def test_m3(self):
        assert capacity(3, 2, "asym") == 4
        for n in range(2, 9):
            assert capacity(3, n, "sym") == 2

    def test_m4(self):
        assert capacity(4, 2, "asym") == 3
        assert capacity(4, 3, "asym") == 5
        assert capacity(4, 4, "asym") == 9
        for n in range(2, 9):
            assert capacity(4, n, "sym") == 1

    def test_exact_recursion_counts_where_reported_values_differ(self):
        # m=3,n=3 and m=4,n=5 come out one above the counts quoted in the
        # literature; the last feasible values sit well below 1
        r33 = critical_sequence(3, 3, "asym")
        assert r33.k_max == 8 and r33.critical_lambdas[-1] == pytest.approx(0.9491, abs=1e-4)
        r45 = critical_sequence(4, 5, "asym")
        assert r45.k_max == 14 and r45.critical_lambdas[-1] == pytest.approx(0.8747, abs=1e-4)

    def test_monotone_in_n_and_m(self):
        for m in range(2, 7):
            ks = [capacity(m, n, "asym") for n in range(2, 8)]
            assert all(a <= b for a, b in zip(ks, ks[1:]))
        for n in range(2, 7):
            ks = [capacity(m, n, "asym") for m in range(2, 8)]
            assert all(a >= b for a, b in zip(ks, ks[1:]))

    def test_symmetric_independent_of_n(self):
        for m in range(2, 8):
            assert len({capacity(m, n, "sym") for n in range(2, 10)}) == 1


class TestConservativeBounds:
    @pytest.mark.parametrize("m, n, want", [(3, 2, 2), (3, 3, 4), (2, 2, 4)])
    def test_values(self, m, n, want):
        assert conservative_capacity_bound(m, n) == want

    def test_never_exceeds_exact(self):
        for m in range(2, 7):
            for n in range(2, 7):
                assert conservative_capacity_bound(m, n) <= capacity(m, n, "asym")

    def test_matches_relaxed_iteration(self):
        for m in range(3, 6):
            for n in range(2, 6):
                lam, k = initial_threshold(m, n, "asym"), 0
                while lam <= 1:
                    k += 1
                    lam = relaxed_next(lam)
                assert k == conservative_capacity_bound(m, n)

    def test_required_parties(self):
        assert required_parties(3, 1) == 2
        assert required_parties(3, 7) == 4
        assert required_parties(4, 9) == 6
        rp = [required_parties(4, k) for k in range(1, 500)]
        assert all(a <= b for a, b in zip(rp, rp[1:]))

    def test_required_parties_is_sufficient_for_bound(self):
        for m in (3, 4, 5):
            for k in range(2, 60):
                n = required_parties(m, k)
                assert conservative_capacity_bound(m, n) >= k
                if n > 2:
                    assert conservative_capacity_bound(m, n - 1) < k

    def test_required_parties_rejects_zero(self):
        with pytest.raises(ValueError):
            required_parties(3, 0)


class TestBisection:
    def test_m3_asym_first(self):
        assert critical_bisection(3, 2, "asym", 1) == pytest.approx(0.59259, abs=1e-5)

    def test_m3_sym_second(self):
        assert critical_bisection(3, 2, "sym", 2, [0.76980]) == pytest.approx(0.93974, abs=1e-4)
        exact_prior = critical_sequence(3, 2, "sym").critical_lambdas[:1]
        assert critical_bisection(3, 2, "sym", 2, exact_prior) == pytest.approx(0.939764, abs=1e-5)

    def test_m4_sym_second_infeasible(self):
        assert critical_bisection(4, 2, "sym", 2, [0.81179]) is None

    def test_prior_length_checked(self):
        with pytest.raises(ValueError):
            critical_bisection(3, 2, "sym", 2, [])

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("m", [3, 4])
    @pytest.mark.parametrize("mode", ["sym", "asym"])
    def test_agrees_with_recursion(self, n, m, mode):
        seq = critical_sequence(m, n, mode).critical_lambdas
        for k in range(1, min(5, len(seq)) + 1):
            b = critical_bisection(m, n, mode, k, seq[: k - 1])
            assert b == pytest.approx(seq[k - 1], abs=1e-5)
        if len(seq) < 5:
            assert critical_bisection(m, n, mode, len(seq) + 1, seq) is None
