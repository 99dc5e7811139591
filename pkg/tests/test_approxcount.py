import math
import random
from fractions import Fraction

import pytest

from dioapprox.approxcount import (ApproxQuery, CountRecord, SetSpec,
                                   compactify, compactify_inverse,
                                   count_approximants, dist_star,
                                   enumerate_algebraic, enumerate_rationals,
                                   fit_exponent, loja_estimate,
                                   rationals_in_interval, reproduce_example,
                                   totient_sum)
from dioapprox.errors import (DomainViolation, FeasibilityCap,
                              InsufficientData)
from dioapprox.expr import Box, parse

PARABOLA = SetSpec([parse("x", arity=1), parse("x^2", arity=1)],
                   Box([0], [1]))
CIRCLE = SetSpec([parse("cos(2*pi*x)", arity=1), parse("sin(2*pi*x)", arity=1)],
                 Box([0], [1]))


def test_enumerate_unit_interval_t5():
    pts = [p[0] for p in enumerate_rationals(5, 1, Box([0], [1]))]
    expected = sorted([Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3),
                       Fraction(2, 3), Fraction(1, 4), Fraction(3, 4),
                       Fraction(1, 5), Fraction(2, 5), Fraction(3, 5),
                       Fraction(4, 5)])
    assert pts == expected


def test_enumerate_t1():
    pts = [p[0] for p in enumerate_rationals(1, 1, Box([0], [1]))]
    assert pts == [Fraction(0), Fraction(1)]


@pytest.mark.parametrize("T", [5, 50, 300])
def test_enumeration_matches_totient_sum(T):
    assert len(rationals_in_interval(T, 0, 1)) == 1 + totient_sum(T)


def test_enumeration_no_duplicates_general_window():
    pts = rationals_in_interval(12, Fraction(-1, 2), Fraction(3, 2))
    assert len(pts) == len(set(pts))
    assert all(max(abs(q.numerator), q.denominator) <= 12 for q in pts)


def test_enumerate_algebraic_degree_one_matches_rationals():
    alg = enumerate_algebraic(3, 1)
    assert sorted(a.as_rational() for a in alg) == rationals_in_interval(3)


def test_enumerate_algebraic_finds_sqrt2():
    found = enumerate_algebraic(Fraction(3, 2), 2,
                                window=(Fraction(14, 10), Fraction(3, 2)))
    assert any(a.minpoly.coeffs == (-2, 0, 1) for a in found)


def test_enumerate_algebraic_height_one():
    vals = enumerate_algebraic(1, 2)
    assert sorted(float(a) for a in vals) == [-1.0, 0.0, 1.0]


def test_enumerate_algebraic_northcott_small():
    # termination plus both bounds on every returned element
    from dioapprox.heights import height_algebraic
    out = enumerate_algebraic(2, 2)
    assert out
    for ra in out:
        assert ra.degree <= 2
        assert height_algebraic(ra).leq(2)


def test_enumerate_algebraic_cap():
    with pytest.raises(FeasibilityCap):
        enumerate_algebraic(2, 4)


def test_dist_star_empty_spec():
    iv = dist_star((Fraction(0), Fraction(0)), SetSpec.empty())
    assert (iv.lo, iv.hi) == (1.0, 1.0)


def test_dist_star_on_graph():
    iv = dist_star((Fraction(1, 2), Fraction(1, 4)), PARABOLA, 1e-9)
    assert iv.lo >= 0 and iv.hi <= 1e-8


def test_dist_star_off_graph_value():
    # max-norm distance from (0, 1/2) to the parabola is (sqrt(3)-1)/2
    iv = dist_star((Fraction(0), Fraction(1, 2)), PARABOLA, 1e-7)
    target = (math.sqrt(3) - 1) / 2
    assert iv.lo <= target <= iv.hi
    assert iv.hi - iv.lo < 1e-6
    # dense-sampling oracle lands inside the enclosure, up to its own
    # grid resolution (the sampled minimum overestimates the true one)
    xs = [i / 200000 for i in range(200001)]
    oracle = min(max(abs(x), abs(x * x - 0.5)) for x in xs)
    assert iv.lo <= oracle <= iv.hi + 2e-5


def test_count_on_graph_points():
    rec = count_approximants(PARABOLA, ApproxQuery(10, 1, Fraction(10)),
                             keep_witnesses=True)
    oracle = [x for x in rationals_in_interval(10, 0, 1)
              if max(abs((x * x).numerator), (x * x).denominator) <= 10]
    assert rec.n_approximants == len(oracle)
    assert rec.undecided == 0
    assert sorted(w[0] for w in rec.witnesses) == sorted(oracle)


def test_count_empty_spec():
    rec = count_approximants(SetSpec.empty(), ApproxQuery(10, 1, Fraction(2)))
    assert rec.n_approximants == 0


def test_count_monotone_in_lambda():
    # points exactly at threshold distance stay in the undecided column
    counts, uppers = [], []
    for lam in (1, 2, 4, 8):
        rec = count_approximants(PARABOLA, ApproxQuery(8, 1, Fraction(lam)))
        counts.append(rec.n_approximants)
        uppers.append(rec.n_approximants + rec.undecided)
    assert counts == sorted(counts, reverse=True)
    assert uppers == sorted(uppers, reverse=True)


def test_count_trichotomy_boundary_points():
    # distance exactly T^-lambda is undecidable by enclosures and must be
    # reported, never silently counted
    rec = count_approximants(PARABOLA, ApproxQuery(8, 1, Fraction(1)),
                             keep_witnesses=True)
    assert rec.undecided > 0
    assert all(w not in ((Fraction(-1, 8), Fraction(0)),)
               for w in rec.witnesses)


def test_fit_exponent_examples():
    quad = [CountRecord(t, Fraction(1), 1, t * t) for t in (4, 8, 16, 32)]
    slope, band = fit_exponent(quad)
    assert abs(slope - 2.0) < 1e-9
    const = [CountRecord(t, Fraction(1), 1, 9) for t in (4, 8, 16)]
    slope0, _ = fit_exponent(const)
    assert abs(slope0) < 1e-9
    with pytest.raises(InsufficientData):
        fit_exponent(quad[:2])


def test_loja_circle_window():
    c, d = loja_estimate(parse("x^2 + y^2 - 1"), Box([-2, -2], [2, 2]),
                         CIRCLE, 3000, seed=0)
    assert 0.8 <= d <= 1.2
    assert c > 0


def test_loja_power_windows():
    zero = SetSpec([parse("0*x", arity=1)], Box([0], [1]))
    _, d1 = loja_estimate(parse("x", arity=1), Box([-1], [1]), zero, 3000)
    assert 0.9 <= d1 <= 1.1
    _, d2 = loja_estimate(parse("x^2", arity=1), Box([-1], [1]), zero, 3000)
    assert 0.4 <= d2 <= 0.6


def test_compactify_examples():
    assert compactify([Fraction(0)]) == (Fraction(0),)
    out = compactify([Fraction(1)])
    assert out == (Fraction(1, 2),)
    from dioapprox.heights import height_rational
    h_in = height_rational(Fraction(1)).exact.as_fraction()
    h_out = height_rational(out[0]).exact.as_fraction()
    assert h_out <= 2 * h_in ** 2


def test_compactify_round_trip_and_height_contract():
    rng = random.Random(10)
    for _ in range(200):
        q = Fraction(rng.randint(-20, 60), rng.randint(1, 20))
        if q <= -1:
            continue
        image = compactify([q])
        assert compactify_inverse(image) == (q,)
        from dioapprox.heights import height_rational
        hq = height_rational(q).exact.as_fraction()
        him = height_rational(image[0]).exact.as_fraction()
        assert him <= 2 * hq ** 2


def test_compactify_lipschitz_on_samples():
    rng = random.Random(11)
    for _ in range(300):
        x = Fraction(rng.randint(-1, 40), rng.randint(1, 12))
        y = Fraction(rng.randint(-1, 40), rng.randint(1, 12))
        if x < Fraction(-1, 2) or y < Fraction(-1, 2):
            continue
        fx, fy = compactify([x])[0], compactify([y])[0]
        assert abs(fx - fy) <= 4 * abs(x - y)


def test_compactify_domain():
    with pytest.raises(DomainViolation):
        compactify([Fraction(-2)])
    with pytest.raises(DomainViolation):
        compactify_inverse([Fraction(1)])


def test_example_15_reference():
    r = reproduce_example("1.5", T=1000, lam=2)
    assert r["count"] >= 499
    assert r["meets_paper_bound"]
    assert r["n_range"][0] == 500


def test_example_15_slope():
    grid = [2 ** j for j in range(6, 12)]
    r = reproduce_example("1.5", T=grid[-1], lam=2, T_grid=grid)
    slope, _ = fit_exponent(r["records"])
    assert 0.8 <= slope <= 1.2


def test_example_15_brute_force_cross_check():
    # the closed-form family undercounts the certified brute-force harness
    curve = SetSpec([parse("x", arity=1), parse("exp(0 - 1/x)", arity=1)],
                    Box([Fraction(1, 100)], [1]))
    rec = count_approximants(curve, ApproxQuery(12, 1, Fraction(2)))
    fam = reproduce_example("1.5", T=12, lam=2)
    assert rec.n_approximants >= fam["count"] - 1  # origin chart differs


def test_example_14():
    r = reproduce_example("1.4", T=100, lam=2)
    assert r["count"] == 3045
    assert r["members_certified"]
    assert 0.9 <= r["asymptotic_ratio"] <= 1.1


def test_example_16_degeneration():
    r = reproduce_example("1.6", T=50, lam=2)
    assert r["members_certified"] and not r["degenerate_fiber"]
    r0 = reproduce_example("1.6", T=50, lam=2, y=0)
    assert r0["degenerate_fiber"]


def test_example_17():
    r = reproduce_example("1.7", T=50, lam=2)
    assert r["fiber_gap_below_threshold"]
    assert r["count"] == 1 + totient_sum(50)


def test_example_19():
    r = reproduce_example("1.9", m=3)
    assert r["height_is_10_pow_m_factorial"]
    assert r["gap_below_2_pow"]
    assert Fraction(r["xi_m"]) == Fraction(110001, 10 ** 6)
