import math
from fractions import Fraction

import pytest
from mpmath.ctx_iv import MPIntervalContext

from dioapprox.errors import BudgetExceeded, PrecisionExhausted
from dioapprox.rootsum import (MinSumResult, RootSumInstance, is_exact_zero,
                               liouville_floor_check, min_sum, prime_scan,
                               subsum_analysis)


def test_min_sum_f22():
    res = min_sum(RootSumInstance(2, [1, 1]))
    assert res.value_lo <= 2 <= res.value_hi
    assert res.zeros_found == 1  # 1 + (-1)


def test_min_sum_f26():
    res = min_sum(RootSumInstance(6, [1, 1]))
    assert res.value_lo <= 1 <= res.value_hi
    assert res.value_hi - res.value_lo < Fraction(1, 10 ** 15)


def test_min_sum_f25_golden():
    res = min_sum(RootSumInstance(5, [1, 1]))
    target = 2 * math.cos(2 * math.pi / 5)
    assert abs(res.value - target) < 1e-8


def test_min_sum_nonzero_coeffs_required():
    with pytest.raises(ValueError):
        RootSumInstance(5, [1, 0])


def test_min_sum_trivial_n0():
    res = min_sum(RootSumInstance(7, [Fraction(3, 2)]))
    assert res.value_lo <= Fraction(3, 2) <= res.value_hi
    assert res.argmin == ()


def test_liouville_floor_examples():
    inst6 = RootSumInstance(6, [1, 1])
    assert liouville_floor_check(inst6, min_sum(inst6))
    inst37 = RootSumInstance(7, [1, 1, 1])
    assert liouville_floor_check(inst37, min_sum(inst37))


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        min_sum(RootSumInstance(500, [1, 1, 1, 1]), budget=100)


def test_exact_zero_detection_prime():
    inst = RootSumInstance(3, [1, 1, 1])
    assert is_exact_zero(inst, (1, 2))
    assert not is_exact_zero(inst, (1, 1))


def test_exact_zero_detection_composite():
    inst = RootSumInstance(6, [1, 1])
    assert is_exact_zero(inst, (3,))  # 1 + zeta_6^3 = 1 - 1
    assert not is_exact_zero(inst, (2,))
    inst12 = RootSumInstance(12, [1, 1, 1])
    assert is_exact_zero(inst12, (4, 8))


def test_exact_zero_gaussian_coefficients():
    # 1 + i*zeta_4 = 1 + i*i = 0
    inst = RootSumInstance(4, [1, (0, 1)])
    assert is_exact_zero(inst, (1,))
    assert not is_exact_zero(inst, (2,))
    # (1) + (i)(zeta_8^6) = 1 + i*(-i) = 2 over N = 8
    inst8 = RootSumInstance(8, [1, (0, 1)])
    assert not is_exact_zero(inst8, (6,))
    assert is_exact_zero(inst8, (2,))


def test_exact_zero_agrees_with_high_precision():
    ctx = MPIntervalContext()
    ctx.prec = 200
    for N in (7, 12, 30, 60):
        inst = RootSumInstance(N, [1, 1, 1])
        for k1 in range(0, N, max(1, N // 7)):
            for k2 in range(k1, N, max(1, N // 7)):
                exact = is_exact_zero(inst, (k1, k2))
                two_pi = 2 * ctx.pi
                re = 1 + ctx.cos(two_pi * k1 / N) + ctx.cos(two_pi * k2 / N)
                im = ctx.sin(two_pi * k1 / N) + ctx.sin(two_pi * k2 / N)
                mod = re ** 2 + im ** 2
                contains_zero = mod.a <= 0
                below = mod.b < ctx.mpf(10) ** -50
                if exact:
                    assert contains_zero or below
                else:
                    assert not below


def test_prune_equivalence_small():
    for N in (20, 31, 60):
        a = min_sum(RootSumInstance(N, [1, 1, 1]), prune=True)
        b = min_sum(RootSumInstance(N, [1, 1, 1]), prune=False)
        assert (a.value_lo, a.value_hi) == (b.value_lo, b.value_hi)
        assert a.argmin == b.argmin
        assert a.zeros_found == b.zeros_found


def test_conjugation_symmetry():
    # real coefficients: the minimum is invariant under k -> N - k
    for coeffs in ([1, 1], [1, Fraction(2), Fraction(3)]):
        inst = RootSumInstance(11, list(coeffs))
        res = min_sum(inst)
        conj = tuple((11 - k) % 11 for k in res.argmin)
        from dioapprox.rootsum import _certified_modulus
        lo, hi = _certified_modulus(inst, conj, 120)
        assert lo <= res.value_hi and res.value_lo <= hi


def test_subsum_analysis_examples():
    inst = RootSumInstance(3, [1, 1, 1])
    assert subsum_analysis(inst, (1, 2)) == []
    inst2 = RootSumInstance(2, [1, 1, 1, 1])
    subs = subsum_analysis(inst2, (0, 1, 1))
    assert (0, 2) in subs and (1, 3) in subs
    inst3 = RootSumInstance(5, [1, 1, 1])
    assert subsum_analysis(inst3, (0, 0)) == []


def test_enclosure_coefficients_refuse_exact_zero_test():
    enc = ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(1, 10 ** 30)))
    inst = RootSumInstance(4, [1, enc])
    with pytest.raises(PrecisionExhausted):
        is_exact_zero(inst, (1,))


def test_prime_scan_small():
    qual, undecided, rows = prime_scan([1, 1], 0, 1, 23)
    # lambda = 0: every prime whose minimal sum is below 1 qualifies;
    # brute force decides membership.  p = 3 sits exactly on the threshold
    # (|1 + zeta_3| = 1) and lands in the undecided column.
    for entry in qual:
        assert entry["value"][1] < 1
        assert all(o >= 1 for o in entry["orders"])
    assert set(undecided) <= {3}
    got = {e["p"] for e in qual}
    for p, res in rows:
        if res.value_hi < 1:
            assert p in got
    assert {5, 7, 11, 13} <= got


def test_prime_scan_n0_edge():
    qual, undecided, rows = prime_scan([Fraction(5, 7)], 1, 1, 20)
    assert not qual
    assert all(res.argmin == () for _, res in rows)


def test_min_sum_enclosure_coefficients():
    enc = ((Fraction(99, 100), Fraction(101, 100)),
           (Fraction(-1, 100), Fraction(1, 100)))
    res = min_sum(RootSumInstance(5, [1, enc]))
    assert res.value_lo > 0
