import math
import random
from fractions import Fraction

import pytest

from dioapprox.errors import EqualInputs
from dioapprox.exactpow import PowerProduct, pp
from dioapprox.heights import (IntPolynomial, RealAlgebraic, field_degree,
                               height_algebraic, height_point,
                               height_rational, liouville_gap,
                               liouville_lower_bound)


def test_height_rational_examples():
    assert height_rational(Fraction(1, 2)).exact.as_fraction() == 2
    assert height_rational(Fraction(0)).exact.as_fraction() == 1
    assert height_rational(Fraction(7, 3)).exact.as_fraction() == 7


def test_height_sqrt2_exact_power():
    r2 = RealAlgebraic.nth_root(2, 2)
    h = height_algebraic(r2)
    assert h.exact == pp(2) ** Fraction(1, 2)
    assert abs(h.value - math.sqrt(2)) < 1e-9


def test_height_degree_one_matches_rational():
    for q in (Fraction(3, 2), Fraction(-5, 7), Fraction(12)):
        ra = RealAlgebraic.from_rational(q)
        assert height_algebraic(ra).exact == height_rational(q).exact


def test_height_golden_ratio_enclosure():
    phi = RealAlgebraic(IntPolynomial([-1, -1, 1]), 1, 2)
    h = height_algebraic(phi, precision=80)
    target = ((1 + math.sqrt(5)) / 2) ** 0.5
    assert h.lo <= Fraction(target).limit_denominator(10 ** 15) <= h.hi \
        or abs(h.value - target) < 1e-12
    assert h.exact is None  # irrational Mahler measure


def test_height_roots_of_unity():
    minus_one = RealAlgebraic(IntPolynomial([1, 1]), -1, -1)
    assert height_algebraic(minus_one).exact == PowerProduct.one()


def test_liouville_lower_bound_examples():
    assert liouville_lower_bound({(2,): 1, (0,): -2},
                                 [Fraction(3, 2)]) == Fraction(1, 54)
    assert liouville_lower_bound({(1,): 1}, [Fraction(1)]) == Fraction(1, 2)
    b = liouville_lower_bound({(1, 0): 1, (0, 1): -1},
                              [Fraction(1, 2), Fraction(1, 3)])
    assert b == Fraction(1, 27)
    assert Fraction(1, 6) >= b


def test_liouville_contract_randomized():
    rng = random.Random(0)
    for _ in range(120):
        n = rng.randint(1, 2)
        d = rng.randint(1, 3)
        coeffs = {}
        for _ in range(rng.randint(1, 4)):
            idx = tuple(rng.randint(0, d) for _ in range(n))
            if sum(idx) <= d:
                coeffs[idx] = rng.randint(-10, 10)
        coeffs = {k: v for k, v in coeffs.items() if v} or {(0,) * n: 1}
        x = [Fraction(rng.randint(-10, 10), rng.randint(1, 10))
             for _ in range(n)]
        x = [q for q in x]
        if any(max(abs(q.numerator), q.denominator) > 10 for q in x):
            continue
        val = Fraction(0)
        for idx, c in coeffs.items():
            term = Fraction(c)
            for q, power in zip(x, idx):
                term *= q ** power
            val += term
        bound = liouville_lower_bound(coeffs, x)
        if val != 0:
            assert abs(val) >= bound


def test_liouville_gap_examples():
    assert liouville_gap(Fraction(1, 2), Fraction(1, 3)) == Fraction(1, 12)
    assert Fraction(1, 12) <= Fraction(1, 6)
    assert liouville_gap(Fraction(0), Fraction(1)) == Fraction(1, 2)
    r2 = RealAlgebraic.nth_root(2, 2)
    gap = liouville_gap(r2, RealAlgebraic.from_rational(1))
    assert gap == Fraction(1, 64)
    assert float(gap) <= math.sqrt(2) - 1


def test_liouville_gap_equal_inputs():
    with pytest.raises(EqualInputs):
        liouville_gap(Fraction(1, 2), Fraction(2, 4))
    r2a = RealAlgebraic.nth_root(2, 2)
    r2b = RealAlgebraic.nth_root(2, 2)
    with pytest.raises(EqualInputs):
        liouville_gap(r2a, r2b)


def test_height_multiplicativity_subadditivity():
    rng = random.Random(1)
    for _ in range(300):
        q = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
        qp = Fraction(rng.randint(-30, 30), rng.randint(1, 30))
        h = height_rational(q).exact.as_fraction()
        hp = height_rational(qp).exact.as_fraction()
        assert height_rational(q + qp).exact.as_fraction() <= 2 * h * hp
        assert height_rational(q * qp).exact.as_fraction() <= h * hp


def test_equality_and_sign():
    r2 = RealAlgebraic.nth_root(2, 2)
    neg = RealAlgebraic(IntPolynomial([-2, 0, 1]), -2, -1)
    assert r2 != neg
    assert r2.sign() == 1
    assert neg.sign() == -1
    assert RealAlgebraic.from_rational(Fraction(0)).sign() == 0
    # refining never changes the identified root
    lo0, hi0 = r2.lo, r2.hi
    r2.refine(Fraction(1, 10 ** 20))
    assert lo0 <= r2.lo <= r2.hi <= hi0


def test_field_degree_compositum():
    r2 = RealAlgebraic.nth_root(2, 2)
    r3 = RealAlgebraic.nth_root(3, 2)
    assert field_degree([Fraction(1, 2), Fraction(2, 3)]) == 1
    assert field_degree([r2, Fraction(1, 2)]) == 2
    assert field_degree([r2, r3]) == 4
    assert field_degree([r2, r2]) == 2


def test_height_point_is_max():
    h = height_point([Fraction(1, 2), Fraction(1, 3)])
    assert h.exact.as_fraction() == 3


def test_power_product_comparisons():
    q = pp(2) ** Fraction(1, 2)
    assert q * q == 2
    assert q < 2
    assert q > 1
    assert pp(8) ** Fraction(1, 3) == 2
    assert (pp(4) * pp(9)) ** Fraction(1, 2) == 6
