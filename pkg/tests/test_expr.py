import math
import random
from fractions import Fraction

import pytest

from dioapprox.errors import ArityError, DomainViolation, ExprSyntaxError
from dioapprox.expr import (Box, derivative_bound, eval_interval, eval_jet,
                            eval_point, is_polynomial, parse, print_expr)

CORPUS = [
    "(exp(x)-1)*(exp(y)-1)",
    "x",
    "y^(-1) * x^sqrt(2)",
    "1/2 + x*y - sin(pi*x)",
    "exp(0 - 1/x)",
    "-x^2 + 1",
    "sqrt(x+1)",
    "x^3/3 - 2.5*y",
    "cos(x)^2 + sin(x)^2",
    "log(x + 2) / (y + 3)",
]


def test_parse_examples():
    f = parse("(exp(x)-1)*(exp(y)-1)")
    assert f.arity == 2
    assert parse("x").arity == 1
    g = parse("y^(-1) * x^sqrt(2)")
    assert g.arity == 2


def test_parse_errors():
    with pytest.raises(ExprSyntaxError):
        parse("x + ")
    with pytest.raises(ExprSyntaxError):
        parse("foo(x)")
    with pytest.raises(ArityError):
        parse("x2", arity=1)


@pytest.mark.parametrize("source", CORPUS)
def test_parser_round_trip(source):
    a = parse(source)
    assert parse(print_expr(a)) == a


def test_eval_interval_examples():
    e = eval_interval(parse("exp(x)"), Box([0], [1]))
    assert e.lo <= 1 and 2.71828 <= e.hi <= 2.71830
    c = eval_interval(parse("1/2", arity=1), Box([0], [5]))
    assert c.lo <= 0.5 <= c.hi and c.width < 1e-15
    xy = eval_interval(parse("x*y"), Box([0, -1], [1, 0]))
    assert xy.lo <= -1 <= 0 <= xy.hi and xy.hi < 1e-9


def test_eval_interval_monotone_refinement():
    f = parse("exp(x) * sin(pi * x) + x^2")
    whole = eval_interval(f, Box([0], [1]))
    left = eval_interval(f, Box([0], [Fraction(1, 2)]))
    right = eval_interval(f, Box([Fraction(1, 2)], [1]))
    assert whole.lo <= min(left.lo, right.lo)
    assert whole.hi >= max(left.hi, right.hi)


def test_eval_interval_domain_violation():
    with pytest.raises(DomainViolation):
        eval_interval(parse("log(x)"), Box([0], [1]))
    with pytest.raises(DomainViolation):
        eval_interval(parse("1/x"), Box([-1], [1]))


def test_point_evaluation_soundness_random():
    rng = random.Random(2)
    fns = [parse(s) for s in CORPUS]
    import mpmath
    for _ in range(1000):
        f = rng.choice(fns)
        pt = [Fraction(rng.randint(1, 64), 64) for _ in range(f.arity)]
        try:
            iv = eval_point(f, pt, 53)
        except DomainViolation:
            continue
        hp = eval_point(f, pt, 200)
        # the high-precision enclosure must sit inside the float one
        assert iv.lo <= hp.lo and hp.hi <= iv.hi


def test_jets_exponential_series():
    j = eval_jet(parse("exp(x)"), [Fraction(0)], 3)
    for i, target in enumerate([1, 1, Fraction(1, 2), Fraction(1, 6)]):
        assert j.coefficient((i,)).contains(Fraction(target))


def test_jets_binomial():
    j = eval_jet(parse("x^2"), [Fraction(1)], 2)
    assert [j.coefficient((i,)) for i in range(3)] == [1, 2, 1]


def test_jets_mixed_product():
    j = eval_jet(parse("(exp(x)-1)*(exp(y)-1)"), [Fraction(0), Fraction(0)], 2)
    assert j.coefficient((1, 1)).contains(Fraction(1))
    for pure in ((1, 0), (0, 1), (2, 0), (0, 2)):
        c = j.coefficient(pure)
        assert c is None or (abs(c.lo) < 1e-15 and abs(c.hi) < 1e-15)


def test_jets_match_finite_differences():
    h = Fraction(1, 2 ** 12)
    for source in ["exp(x) * x", "sin(pi*x) + x^2", "log(x + 2)"]:
        f = parse(source)
        x0 = Fraction(1, 3)
        jet = eval_jet(f, [x0], 2, precision=128)
        val = lambda t: eval_point(f, [t], 128).mid
        d1 = (val(x0 + h) - val(x0 - h)) / float(2 * h)
        d2 = (val(x0 + h) - 2 * val(x0) + val(x0 - h)) / float(h) ** 2
        assert abs(jet.coefficient((1,)).mid - d1) < float(h) ** 2 * 50
        assert abs(2 * jet.coefficient((2,)).mid - d2) < float(h) ** 2 * 500


def test_derivative_bound_windows():
    B = derivative_bound([parse("x")], Box([0], [1]), 2)
    assert 1 <= B <= 2
    B2 = derivative_bound([parse("exp(x)")], Box([0], [1]), 3)
    assert math.e <= float(B2) <= 2 * math.e
    B3 = derivative_bound([parse("x", arity=1), parse("x^2", arity=1)],
                          Box([0], [1]), 2)
    assert 2 <= B3 < Fraction(21, 10)


def test_derivative_bound_dominates_monomial_derivatives():
    # |d^a (phi^i)| <= B^l(i) l(i)^l(a) for the composed monomials
    phis = [parse("x", arity=1), parse("(exp(x)-1)/2", arity=1)]
    B = derivative_bound(phis, Box.unit(1), 4)
    from dioapprox.jets import multiindices
    from dioapprox.expr import eval_jet_box
    for i in multiindices(2, 3):
        li = sum(i)
        if li == 0:
            continue
        comp = None
        for j, power in enumerate(i):
            for _ in range(power):
                jet = eval_jet_box(phis[j], Box.unit(1), 4)
                comp = jet if comp is None else comp * jet
        for alpha, mag in comp.derivative_magnitudes().items():
            la = sum(alpha)
            if la > 4:
                continue
            bound = Fraction(B) ** li * Fraction(max(li, 1)) ** la
            assert mag <= bound * Fraction(101, 100)


def test_is_polynomial():
    assert is_polynomial(parse("x^2 - y/2"))
    assert not is_polynomial(parse("exp(x)"))
    assert not is_polynomial(parse("x^sqrt(2)", arity=1))
    assert not is_polynomial(parse("x^(-1)", arity=1))


def test_real_exponent_evaluation():
    v = eval_point(parse("x^sqrt(2)", arity=1), [Fraction(1, 2)], 64)
    target = 0.5 ** math.sqrt(2)
    assert v.lo <= target <= v.hi
