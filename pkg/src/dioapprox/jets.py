"""Truncated multivariate Taylor (jet) arithmetic.

A jet stores enclosures (or exact Fractions) of the scaled derivatives
d^a f(z)/a! for all multi-indices a with |a| <= order.  Arithmetic is exact
truncated-series arithmetic on the coefficients; composition with a scalar
analytic function goes through its Taylor series in (f - f0), which is
nilpotent at the truncation order.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import DomainViolation


@lru_cache(maxsize=256)
def multiindices(k: int, order: int) -> tuple:
    """All a in N_0^k with |a| <= order, graded-lex order."""
    out = []

    def rec(prefix, remaining, budget):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for v in range(budget + 1):
            rec(prefix + [v], remaining - 1, budget - v)

    for total in range(order + 1):
        start = len(out)
        rec([], k, total)
        out[start:] = [a for a in out[start:] if sum(a) == total]
    return tuple(out)


def _add_idx(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Jet:
    """Coefficients over multi-indices up to a fixed truncation order."""

    __slots__ = ("k", "order", "coeffs")

    def __init__(self, k: int, order: int, coeffs: dict):
        self.k = k
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def constant(cls, k, order, value):
        return cls(k, order, {(0,) * k: value})

    @classmethod
    def variable(cls, k, order, index, center):
        z = (0,) * k
        if order == 0:
            return cls(k, order, {z: center})
        e = tuple(1 if i == index else 0 for i in range(k))
        one = Fraction(1) if isinstance(center, Fraction) else center * 0 + 1
        return cls(k, order, {z: center, e: one})

    def coefficient(self, alpha):
        return self.coeffs.get(tuple(alpha))

    def value(self):
        return self.coeffs.get((0,) * self.k, 0)

    def __add__(self, other):
        if not isinstance(other, Jet):
            out = dict(self.coeffs)
            z = (0,) * self.k
            out[z] = out[z] + other if z in out else other
            return Jet(self.k, self.order, out)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out[a] + c if a in out else c
        return Jet(self.k, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.k, self.order, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.k, self.order,
                       {a: c * other for a, c in self.coeffs.items()})
        out = {}
        for a, ca in self.coeffs.items():
            la = sum(a)
            for b, cb in other.coeffs.items():
                if la + sum(b) > self.order:
                    continue
                ab = _add_idx(a, b)
                prod = ca * cb
                out[ab] = out[ab] + prod if ab in out else prod
        return Jet(self.k, self.order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * _invert_scalar(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self) -> "Jet":
        """1/f via the geometric series in (f - f0)/f0."""
        f0 = self.value()
        if _maybe_contains_zero(f0):
            raise DomainViolation("jet reciprocal at value possibly 0")
        inv0 = _invert_scalar(f0)
        series = [inv0]
        acc = inv0
        for _ in range(self.order):
            acc = acc * (-inv0)
            series.append(acc)
        return self.compose_series(series)

    def compose_series(self, series) -> "Jet":
        """sum series[i] * (f - f0)^i, truncated; series[i] ~ g^(i)(f0)/i!."""
        z = (0,) * self.k
        delta = Jet(self.k, self.order,
                    {a: c for a, c in self.coeffs.items() if a != z})
        # Horner in the nilpotent part
        acc = Jet.constant(self.k, self.order, series[-1])
        for g in reversed(series[:-1]):
            acc = acc * delta + g
        return acc

    def pow_int(self, n: int) -> "Jet":
        if n < 0:
            return self.reciprocal().pow_int(-n)
        one = (Fraction(1) if isinstance(self.value(), Fraction)
               else self.value() * 0 + 1)
        result = Jet.constant(self.k, self.order, one)
        for _ in range(n):
            result = result * self
        return result

    def exp(self) -> "Jet":
        f0 = self.value()
        e0 = f0.exp()
        series = [e0]
        fact = 1
        for i in range(1, self.order + 1):
            fact *= i
            series.append(e0 / fact)
        return self.compose_series(series)

    def log(self) -> "Jet":
        f0 = self.value()
        if _maybe_nonpositive(f0):
            raise DomainViolation("jet log at value possibly <= 0")
        series = [f0.log()]
        inv0 = _invert_scalar(f0)
        acc = inv0
        for i in range(1, self.order + 1):
            series.append(acc / i if i % 2 == 1 else -(acc / i))
            acc = acc * inv0
        return self.compose_series(series)

    def sin(self) -> "Jet":
        return self._sincos(0)

    def cos(self) -> "Jet":
        return self._sincos(1)

    def _sincos(self, phase: int) -> "Jet":
        f0 = self.value()
        s0, c0 = f0.sin(), f0.cos()
        cycle = (s0, c0, -s0, -c0)
        series = []
        fact = 1
        for i in range(self.order + 1):
            if i:
                fact *= i
            series.append(cycle[(i + phase) % 4] / fact)
        return self.compose_series(series)

    def derivative_magnitudes(self):
        """{alpha: sup |d^alpha f|} from the coefficients (alpha! scaled)."""
        out = {}
        for a, c in self.coeffs.items():
            fact = 1
            for v in a:
                fact *= math.factorial(v)
            out[a] = _magnitude(c) * fact
        return out


def _invert_scalar(v):
    return 1 / v


def _maybe_contains_zero(v) -> bool:
    if isinstance(v, Fraction):
        return v == 0
    return v.contains_zero()


def _maybe_nonpositive(v) -> bool:
    if isinstance(v, Fraction):
        return v <= 0
    return v.lo <= 0


def _magnitude(v):
    if isinstance(v, Fraction):
        return abs(v)
    return Fraction(v.mag()) if not isinstance(v.mag(), Fraction) else v.mag()
