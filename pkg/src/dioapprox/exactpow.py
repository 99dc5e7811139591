"""Exact arithmetic on products of rational powers of rationals.

Values like r = T^(-8/3) or Delta = r^(-6) are represented as maps
base -> Fraction exponent with bases factored by small-prime trial division
(large cofactors stay as opaque integer bases; full factorization of
hundred-digit norms would dominate the runtime).  Identities such as
Q * r^(b+1) = r^sigma are decided exactly: structurally when the bases
cancel, else by clearing exponents to integers, else by certified interval
logarithms with precision doubling.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath.ctx_iv import MPIntervalContext

from .errors import PrecisionExhausted

_MAX_PREC = 4096
_TRIAL_LIMIT = 3163  # cofactors below _TRIAL_LIMIT^2 are certainly prime


def _small_primes():
    global _PRIMES
    if _PRIMES is None:
        sieve = bytearray([1]) * (_TRIAL_LIMIT + 1)
        sieve[:2] = b"\x00\x00"
        for i in range(2, int(_TRIAL_LIMIT ** 0.5) + 1):
            if sieve[i]:
                sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
        _PRIMES = [i for i, f in enumerate(sieve) if f]
    return _PRIMES


_PRIMES = None


def _factor_positive_rational(q: Fraction) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for n, sign in ((int(q.numerator), 1), (int(q.denominator), -1)):
        if n == 1:
            continue
        for p in _small_primes():
            if p * p > n:
                break
            while n % p == 0:
                out[p] = out.get(p, Fraction(0)) + sign
                n //= p
        if n > 1:
            out[n] = out.get(n, Fraction(0)) + sign
    return {p: e for p, e in out.items() if e != 0}


class PowerProduct:
    """A positive real of the form prod p_i^(e_i), p_i prime, e_i rational."""

    __slots__ = ("factors",)

    def __init__(self, factors: dict[int, Fraction] | None = None):
        self.factors = {p: Fraction(e) for p, e in (factors or {}).items() if e != 0}

    @classmethod
    def from_rational(cls, q) -> "PowerProduct":
        q = Fraction(q)
        if q <= 0:
            raise ValueError("PowerProduct represents positive reals only")
        return cls(_factor_positive_rational(q))

    @classmethod
    def one(cls) -> "PowerProduct":
        return cls({})

    def __repr__(self):
        if not self.factors:
            return "PowerProduct(1)"
        terms = " * ".join(f"{p}^({e})" for p, e in sorted(self.factors.items()))
        return f"PowerProduct({terms})"

    def __eq__(self, other):
        if isinstance(other, PowerProduct):
            return self.factors == other.factors
        try:
            q = Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented
        if q <= 0:
            return False
        return self.factors == PowerProduct.from_rational(q).factors

    def __hash__(self):
        return hash(frozenset(self.factors.items()))

    def __mul__(self, other):
        if not isinstance(other, PowerProduct):
            other = PowerProduct.from_rational(Fraction(other))
        out = dict(self.factors)
        for p, e in other.factors.items():
            out[p] = out.get(p, Fraction(0)) + e
        return PowerProduct(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, PowerProduct):
            other = PowerProduct.from_rational(Fraction(other))
        return self * other ** Fraction(-1)

    def __rtruediv__(self, other):
        return PowerProduct.from_rational(other) / self

    def __pow__(self, exponent) -> "PowerProduct":
        e = Fraction(exponent)
        return PowerProduct({p: x * e for p, x in self.factors.items()})

    def is_rational(self) -> bool:
        return all(e.denominator == 1 for e in self.factors.values())

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not an exact rational")
        out = Fraction(1)
        for p, e in self.factors.items():
            out *= Fraction(p) ** int(e)
        return out

    def log_interval(self, prec: int):
        iv = MPIntervalContext()
        iv.prec = prec
        total = iv.mpf(0)
        for p, e in self.factors.items():
            total += (iv.mpf(e.numerator) / iv.mpf(e.denominator)) * iv.log(iv.mpf(p))
        return total

    def __float__(self) -> float:
        return float(math.exp(float(mpmath.mpf(self.log_interval(64).mid)))) if self.factors else 1.0

    def enclosure(self, prec: int = 128):
        """(lo, hi) Fractions certified to enclose the value."""
        iv = MPIntervalContext()
        iv.prec = prec
        v = iv.exp(self.log_interval(prec))
        from mpmath.libmp import to_rational
        plo, qlo = to_rational(v._mpi_[0])
        phi_, qhi = to_rational(v._mpi_[1])
        lo = Fraction(int(plo), int(qlo))
        hi = Fraction(int(phi_), int(qhi))
        return lo, hi

    def _cmp(self, other) -> int:
        """-1, 0, +1 against PowerProduct/Fraction/int; exact."""
        if not isinstance(other, PowerProduct):
            q = Fraction(other)
            if q <= 0:
                return 1
            other = PowerProduct.from_rational(q)
        ratio = self / other
        if not ratio.factors:
            return 0
        # primes are multiplicatively independent, so a nonempty canonical
        # factorization is never 1; clear exponents to integers when cheap
        denom = math.lcm(*(e.denominator for e in ratio.factors.values()))
        bits = sum(abs(int(e * denom)) * p.bit_length()
                   for p, e in ratio.factors.items())
        if bits <= 200_000:
            num = 1
            den = 1
            for p, e in ratio.factors.items():
                ie = int(e * denom)
                if ie > 0:
                    num *= p ** ie
                else:
                    den *= p ** (-ie)
            if num == den:
                return 0
            return 1 if num > den else -1
        prec = 64
        while prec <= _MAX_PREC:
            lg = ratio.log_interval(prec)
            if lg.a > 0:
                return 1
            if lg.b < 0:
                return -1
            prec *= 2
        raise PrecisionExhausted("PowerProduct comparison undecided")

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


def pp(q) -> PowerProduct:
    """Shorthand constructor from a rational."""
    return q if isinstance(q, PowerProduct) else PowerProduct.from_rational(q)
