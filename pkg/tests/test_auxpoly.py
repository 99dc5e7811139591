import math
import random
from fractions import Fraction

import pytest

from dioapprox.auxpoly import (AuxParams, D, build_aux_polynomials,
                               choose_parameters, hypercube_cover,
                               sup_certificate, taylor_siegel_matrix,
                               verify_vanishing)
from dioapprox.errors import HypothesisViolated
from dioapprox.expr import Box, parse
from dioapprox.heights import RealAlgebraic

PARABOLA = [parse("x", arity=1), parse("x^2", arity=1)]


def test_choose_parameters_reference_triple():
    assert choose_parameters(1, 1, 2, 1, 1) == (14, 59, 112)


def test_choose_parameters_b_exceeds_d():
    rng = random.Random(4)
    for _ in range(25):
        k = rng.randint(1, 2)
        r = rng.randint(k, 2)
        n = rng.randint(r + 1, 4)
        e = rng.randint(1, 2)
        eps = Fraction(rng.choice([2, 3, 4]), 4)
        d, b, lam = choose_parameters(k, r, n, e, eps)
        assert b > d
        assert lam == 4 * (r + 1) * e * d
        # the two defining inequalities
        assert (e + 1) * D(k, b) <= D(r + 1, d) < (e + 1) * D(k, b + 1)
        assert Fraction((k + 1) * (r + 1) * e * d, b) <= eps / math.comb(n, r + 1)


def test_choose_parameters_degree_cap():
    d, b, lam = choose_parameters(1, 1, 2, 1, 1)
    cap = 2 ** 3 * 1 * 2 * math.comb(2, 2) * 1
    assert d <= cap == 16


def test_exponent_identity_random_bundles():
    rng = random.Random(7)
    checked = 0
    while checked < 100:
        k = rng.randint(1, 2)
        n = rng.randint(k + 1, 4)
        e = rng.randint(1, 3)
        b = rng.randint(2, 9)
        d = rng.randint(1, 6)
        if D(k, b) > D(n, d):
            continue
        T = rng.randint(2, 10 ** 4)
        params = AuxParams.unconstrained(k, n, e, d, b, T)
        assert params.exponent_identity_holds()
        checked += 1


def test_binomial_identity_exact():
    for k in range(1, 31):
        for b in range(1, 31):
            lhs = sum(math.comb(k + j - 1, j) * (b - j) for j in range(b + 1))
            assert lhs * (k + 1) == b * math.comb(b + k, b)


def test_hypercube_cover_counts():
    c = hypercube_cover(1, Fraction(1, 2))
    assert len(c) == 3
    assert len(hypercube_cover(2, Fraction(1))) == 1
    c10 = hypercube_cover(1, Fraction(1, 10))
    assert len(c10) == 11 <= 2 * 10


def test_hypercube_cover_covers_unit_interval():
    cover = hypercube_cover(1, Fraction(1, 7))
    points = [Fraction(i, 1000) for i in range(1, 1000)]
    for x in points[:: 50]:
        assert any(b.lo[0] <= x <= b.hi[0] for b in cover)


def test_taylor_matrix_structure():
    params = AuxParams.unconstrained(1, 1, 1, 1, 1, 10 ** 3)
    inst, monos, alphas, center, _ = taylor_siegel_matrix(
        [parse("x", arity=1)], Box([0], [Fraction(1, 4)]), params)
    # columns (1, x); rows alpha = 0, 1 from jets of (1, x)
    assert monos == ((0,), (1,))
    assert inst.vecs[0] == (1, center[0])
    assert inst.vecs[1] == (0, 1)
    # row norms scale exactly to r^-(b - l(alpha))
    assert inst.row_norm(0) == params.r_side ** -1
    assert inst.row_norm(1) == params.r_side ** 0
    assert inst.delta() == params.Delta


def test_taylor_matrix_derivative_row():
    params = AuxParams.unconstrained(1, 2, 1, 1, 1, 10 ** 3)
    inst, monos, alphas, center, _ = taylor_siegel_matrix(
        PARABOLA, Box([Fraction(1, 4)], [Fraction(3, 4)]), params)
    assert center == (Fraction(1, 2),)
    # raw alpha=1 row over (1, X2, X1) hmm: graded-lex monomials
    row = dict(zip(monos, inst.vecs[1]))
    assert row[(0, 0)] == 0
    assert row[(1, 0)] == 1
    assert row[(0, 1)] == 1  # d/dz of x^2 at 1/2, scaled by 1/1!


def test_build_parabola_small_vanishing():
    params = AuxParams.unconstrained(1, 2, 1, 2, 3, 10, c_prime=Fraction(1, 2))
    polys = build_aux_polynomials(PARABOLA, 10, params)
    assert len(polys) == len(hypercube_cover(1, params.r_side))
    assert all(pl.sup_bound <= pl.sup_target for pl in polys)
    assert any(pl.vanishes_on_image for pl in polys)
    cover = polys[0].cover
    for x in [Fraction(a, b) for b in range(1, 11) for a in range(1, b)
              if math.gcd(a, b) == 1]:
        poly = polys[cover.locate([x])]
        assert verify_vanishing(poly, (x, x * x))


def test_build_requires_hypothesis():
    params = AuxParams.unconstrained(1, 2, 1, 2, 3, 10)  # r too large at c'=1
    with pytest.raises(HypothesisViolated):
        build_aux_polynomials(PARABOLA, 10, params)


def test_build_exp_graph_sup_bounds():
    params = AuxParams.unconstrained(1, 2, 1, 2, 3, 12)
    phis = [parse("x", arity=1), parse("(exp(x)-1)/2", arity=1)]
    polys = build_aux_polynomials(phis, 12, params)
    assert all(pl.sup_bound <= pl.sup_target for pl in polys)
    assert all(pl.coeff_bound_ok for pl in polys)


def test_verify_vanishing_examples():
    f = {(0, 1): 1, (2, 0): -1}  # X2 - X1^2 in graded-lex index notation
    assert verify_vanishing(f, (Fraction(1, 3), Fraction(1, 9)))
    assert not verify_vanishing(f, (Fraction(1, 3), Fraction(1, 8)))
    r2 = RealAlgebraic.nth_root(2, 2)
    assert verify_vanishing({(2,): 1, (0,): -2}, (r2,))
    assert not verify_vanishing({(2,): 1, (0,): -3}, (r2,))


def test_lemma_elementary_estimate_randomized():
    # |x^i - y^i| <= max(1,|x-y|)^(l(i)-1) (1+|x|)^l(i) |x-y|
    rng = random.Random(8)
    for _ in range(1000):
        n = rng.randint(1, 3)
        i = tuple(rng.randint(0, 3) for _ in range(n))
        if sum(i) == 0 or sum(i) > 5:
            continue
        x = [Fraction(rng.randint(-8, 8), rng.randint(1, 8)) for _ in range(n)]
        y = [Fraction(rng.randint(-8, 8), rng.randint(1, 8)) for _ in range(n)]
        xi = math.prod(Fraction(v) ** p for v, p in zip(x, i))
        yi = math.prod(Fraction(v) ** p for v, p in zip(y, i))
        diff = max(abs(a - b) for a, b in zip(x, y))
        xin = max(abs(v) for v in x)
        li = sum(i)
        bound = max(Fraction(1), diff) ** (li - 1) * (1 + xin) ** li * diff
        assert abs(xi - yi) <= bound


def test_sup_bound_sampling_cross_check():
    params = AuxParams.unconstrained(1, 2, 1, 2, 3, 13)
    phis = [parse("x", arity=1), parse("(exp(x)-1)/2", arity=1)]
    polys = build_aux_polynomials(phis, 13, params)
    rng = random.Random(9)
    import mpmath
    for pl in rng.sample(polys, 12):
        cube = pl.cube
        lo = max(float(cube.lo[0]), 1e-9)
        hi = min(float(cube.hi[0]), 1 - 1e-9)
        if lo >= hi:
            continue
        worst = 0.0
        for i in range(50):
            z = lo + (hi - lo) * i / 49
            val = sum(c * z ** m[0] * ((math.exp(z) - 1) / 2) ** m[1]
                      for m, c in zip(pl.monomials, pl.coeffs))
            worst = max(worst, abs(val))
        assert worst <= float(pl.sup_target) * 1.0001
