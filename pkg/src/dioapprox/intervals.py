"""Outward-rounded interval arithmetic.

Two backends share one calling convention: a fast float64 backend
(``Interval``) whose arithmetic widens every result by ``math.nextafter``
steps, and an mpmath-backed backend (``MPContext``) for precision beyond 53
bits.  Transcendental float results are widened by a few ulps since libm is
not correctly rounded.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational

from .errors import DomainViolation

_INF = math.inf

# libm exp/log/sin/cos are good to ~1 ulp; widen by 4 to be safe
_TRANS_ULPS = 4


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _widen(x: float, steps: int, direction: float) -> float:
    for _ in range(steps):
        x = math.nextafter(x, direction)
    return x


class Interval:
    """Closed interval [lo, hi] of float64 with outward rounding."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        self.lo = float(lo)
        self.hi = float(hi)
        if self.lo > self.hi:
            raise ValueError(f"invalid interval [{lo}, {hi}]")

    @classmethod
    def from_fraction(cls, q) -> "Interval":
        f = float(q)
        lo, hi = f, f
        if Fraction(f) > q:
            lo = _down(f)
        elif Fraction(f) < q:
            hi = _up(f)
        return cls(lo, hi)

    @classmethod
    def pi(cls) -> "Interval":
        return cls(_down(math.pi), _up(math.pi))

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool:
        if isinstance(x, Fraction):
            return Fraction(self.lo) <= x <= Fraction(self.hi)
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def mag(self) -> float:
        """sup |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> float:
        """inf |x| over the interval."""
        if self.contains_zero():
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __abs__(self):
        return Interval(self.mig(), self.mag())

    def _coerce(other):
        if isinstance(other, Interval):
            return other
        if isinstance(other, Fraction):
            return Interval.from_fraction(other)
        return Interval(float(other))

    def __add__(self, other):
        o = Interval._coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = Interval._coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return Interval._coerce(other) - self

    def __mul__(self, other):
        o = Interval._coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(prods)), _up(max(prods)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Interval._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise DomainViolation("division by interval containing 0")
        quots = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_down(min(quots)), _up(max(quots)))

    def __rtruediv__(self, other):
        return Interval._coerce(other) / self

    def pow_int(self, n: int) -> "Interval":
        if n == 0:
            return Interval(1.0, 1.0)
        if n < 0:
            return Interval(1.0, 1.0) / self.pow_int(-n)
        lo, hi = self.lo, self.hi
        if n % 2 == 1:
            return Interval(_down(lo ** n), _up(hi ** n))
        m = self.mig()
        big = self.mag()
        return Interval(_down(m ** n), _up(big ** n))

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise DomainViolation("sqrt of interval containing negatives")
        return Interval(_down(math.sqrt(self.lo)), _up(math.sqrt(self.hi)))

    def exp(self) -> "Interval":
        return Interval(_widen(math.exp(self.lo), _TRANS_ULPS, -_INF),
                        _widen(math.exp(self.hi), _TRANS_ULPS, _INF))

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise DomainViolation("log of interval reaching <= 0")
        return Interval(_widen(math.log(self.lo), _TRANS_ULPS, -_INF),
                        _widen(math.log(self.hi), _TRANS_ULPS, _INF))

    def _trig(self, fn, deriv_max=1.0) -> "Interval":
        # monotonicity is unreliable across extrema; sample endpoints and
        # include extrema when the interval spans a multiple of pi/2
        if self.width >= 2 * math.pi:
            return Interval(-1.0, 1.0)
        lo_v = fn(self.lo)
        hi_v = fn(self.hi)
        vals = [lo_v, hi_v]
        # critical points of sin: pi/2 + k pi; of cos: k pi
        shift = 0.5 * math.pi if fn is math.sin else 0.0
        k0 = math.floor((self.lo - shift) / math.pi)
        k1 = math.ceil((self.hi - shift) / math.pi)
        for k in range(k0, k1 + 1):
            c = shift + k * math.pi
            if self.lo <= c <= self.hi:
                vals.append(fn(c))
        lo = _widen(min(vals), _TRANS_ULPS, -_INF)
        hi = _widen(max(vals), _TRANS_ULPS, _INF)
        return Interval(max(lo, -1.0), min(hi, 1.0))

    def sin(self) -> "Interval":
        return self._trig(math.sin)

    def cos(self) -> "Interval":
        return self._trig(math.cos)

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def to_fractions(self):
        return Fraction(self.lo), Fraction(self.hi)


class MPInterval:
    """Thin wrapper over mpmath.iv values for precision > 53 bits."""

    __slots__ = ("v", "ctx")

    def __init__(self, v, ctx):
        self.v = v
        self.ctx = ctx

    def _wrap(self, v):
        return MPInterval(v, self.ctx)

    def _coerce(self, other):
        if isinstance(other, MPInterval):
            return other.v
        if isinstance(other, Fraction):
            return self.ctx.from_fraction(other).v
        return self.ctx.iv.mpf(other)

    def __repr__(self):
        return f"MPInterval({self.v})"

    @property
    def lo(self) -> float:
        f = self.lo_fraction()
        x = float(f)
        return _down(x) if Fraction(x) > f else x

    @property
    def hi(self) -> float:
        f = self.hi_fraction()
        x = float(f)
        return _up(x) if Fraction(x) < f else x

    @property
    def width(self) -> float:
        return float(mpmath.mpf(self.v.delta))

    @property
    def mid(self) -> float:
        return float(mpmath.mpf(self.v.mid))

    def lo_fraction(self) -> Fraction:
        # raw endpoint tuple; mpmath.mpf(self.v.a) would re-round to the
        # global precision and lose directedness
        p, q = to_rational(self.v._mpi_[0])
        return Fraction(int(p), int(q))

    def hi_fraction(self) -> Fraction:
        p, q = to_rational(self.v._mpi_[1])
        return Fraction(int(p), int(q))

    def to_fractions(self):
        return self.lo_fraction(), self.hi_fraction()

    def contains(self, x) -> bool:
        if isinstance(x, Fraction):
            return self.lo_fraction() <= x <= self.hi_fraction()
        return x in self.v

    def contains_zero(self) -> bool:
        return self.v.a <= 0 <= self.v.b

    def mag(self) -> Fraction:
        p, q = to_rational(abs(self.v)._mpi_[1])
        return Fraction(int(p), int(q))

    def mig(self):
        if self.contains_zero():
            return Fraction(0)
        p, q = to_rational(abs(self.v)._mpi_[0])
        return Fraction(int(p), int(q))

    def __neg__(self):
        return self._wrap(-self.v)

    def __abs__(self):
        return self._wrap(abs(self.v))

    def __add__(self, other):
        return self._wrap(self.v + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.v - self._coerce(other))

    def __rsub__(self, other):
        return self._wrap(self._coerce(other) - self.v)

    def __mul__(self, other):
        return self._wrap(self.v * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.a <= 0 <= o.b:
            raise DomainViolation("division by interval containing 0")
        return self._wrap(self.v / o)

    def __rtruediv__(self, other):
        if self.contains_zero():
            raise DomainViolation("division by interval containing 0")
        return self._wrap(self._coerce(other) / self.v)

    def pow_int(self, n: int):
        return self._wrap(self.v ** n)

    def sqrt(self):
        if self.v.a < 0:
            raise DomainViolation("sqrt of interval containing negatives")
        return self._wrap(self.ctx.iv.sqrt(self.v))

    def exp(self):
        return self._wrap(self.ctx.iv.exp(self.v))

    def log(self):
        if self.v.a <= 0:
            raise DomainViolation("log of interval reaching <= 0")
        return self._wrap(self.ctx.iv.log(self.v))

    def sin(self):
        return self._wrap(self.ctx.iv.sin(self.v))

    def cos(self):
        return self._wrap(self.ctx.iv.cos(self.v))


class FloatContext:
    """Constructor bundle for the float64 backend."""

    prec = 53

    def from_fraction(self, q):
        return Interval.from_fraction(Fraction(q))

    def from_int(self, n):
        return Interval(float(n)) if abs(n) < 2**53 else self.from_fraction(Fraction(n))

    def interval(self, lo, hi):
        out = Interval.from_fraction(Fraction(lo))
        return out.hull(Interval.from_fraction(Fraction(hi)))

    def pi(self):
        return Interval.pi()


class MPContext:
    """Constructor bundle for the mpmath backend at a given precision."""

    def __init__(self, prec: int):
        self.prec = prec
        self.iv = MPIntervalContext()
        self.iv.prec = prec

    def from_fraction(self, q):
        q = Fraction(q)
        return MPInterval(self.iv.mpf(q.numerator) / self.iv.mpf(q.denominator), self)

    def from_int(self, n):
        return MPInterval(self.iv.mpf(n), self)

    def interval(self, lo, hi):
        a = self.from_fraction(Fraction(lo))
        b = self.from_fraction(Fraction(hi))
        return MPInterval(self.iv.mpf([a.v.a, b.v.b]), self)

    def pi(self):
        return MPInterval(+self.iv.pi, self)


def context_for(prec: int):
    """Pick the cheapest sound backend for the requested bits."""
    return FloatContext() if prec <= 53 else MPContext(prec)
