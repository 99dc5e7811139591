"""Exact rational/real-algebraic arithmetic, Weil heights, Liouville bounds.

Real algebraic numbers are primitive integer minimal polynomials plus
isolating intervals with rational endpoints; every sign/equality decision is
exact.  Heights of algebraic numbers come from certified complex root
enclosures of the minimal polynomial with adaptive precision doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.ctx_iv import MPIntervalContext
from sympy import Poly, Symbol, cyclotomic_poly, factor_list, resultant, totient

from .errors import EqualInputs, PrecisionExhausted
from .exactpow import PowerProduct, pp

_X = Symbol("x")
_MAX_PREC = 4096


# ---------------------------------------------------------------------------
# integer polynomials (coefficients ascending: coeffs[i] is the x^i term)
# ---------------------------------------------------------------------------

def _content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(c))
    return g or 1


class IntPolynomial:
    """Primitive integer polynomial with positive leading coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if all(c == 0 for c in cs):
            raise ValueError("zero polynomial")
        g = _content(cs)
        cs = [c // g for c in cs]
        if cs[-1] < 0:
            cs = [-c for c in cs]
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def is_irreducible(self) -> bool:
        return _is_irreducible(self.coeffs)

    def sympy_poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)), _X)

    def cauchy_root_bound(self) -> Fraction:
        """All complex roots satisfy |z| <= bound."""
        lead = abs(self.leading)
        m = max(abs(c) for c in self.coeffs[:-1]) if self.degree else 0
        return 1 + Fraction(m, lead)


@lru_cache(maxsize=4096)
def _is_irreducible(coeffs: tuple) -> bool:
    deg = len(coeffs) - 1
    if deg == 0:
        return False
    if deg == 1:
        return True
    if deg <= 3:
        # primitive of degree 2 or 3: irreducible iff no rational root
        return not _has_rational_root(coeffs)
    _, factors = factor_list(Poly(list(reversed(coeffs)), _X))
    return len(factors) == 1 and factors[0][1] == 1


def _divisors(n: int):
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return out


def _has_rational_root(coeffs) -> bool:
    a0, lead = coeffs[0], coeffs[-1]
    if a0 == 0:
        return True
    d = len(coeffs) - 1
    for p in _divisors(abs(a0)):
        for q in _divisors(abs(lead)):
            if math.gcd(p, q) != 1:
                continue
            for num in (p, -p):
                acc = 0
                for i, c in enumerate(coeffs):
                    acc += c * num ** i * q ** (d - i)
                if acc == 0:
                    return True
    return False


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation (exact Fractions)
# ---------------------------------------------------------------------------

def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= q * c
        a.pop()
        if not a:
            break
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a or [Fraction(0)]


@lru_cache(maxsize=2048)
def _sturm_cached(coeffs: tuple) -> tuple:
    p0 = [Fraction(c) for c in coeffs]
    p1 = [i * Fraction(c) for i, c in enumerate(coeffs)][1:]
    seq = [p0]
    if any(p1):
        seq.append(p1)
        while len(seq[-1]) > 1:
            r = _poly_rem(seq[-2], seq[-1])
            if not any(r):
                break
            seq.append([-c for c in r])
    return tuple(tuple(p) for p in seq)


def _sign_changes(seq, x: Fraction) -> int:
    signs = []
    for p in seq:
        acc = Fraction(0)
        for c in reversed(p):
            acc = acc * x + c
        if acc != 0:
            signs.append(1 if acc > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(poly: IntPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]; poly must be squarefree."""
    seq = _sturm_cached(poly.coeffs)
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def isolate_real_roots(poly: IntPolynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi] each holding exactly one real root."""
    bound = poly.cauchy_root_bound()
    seq = _sturm_cached(poly.coeffs)
    out = []

    def split(lo, hi, n):
        if n == 0:
            return
        if n == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        left = _sign_changes(seq, lo) - _sign_changes(seq, mid)
        split(lo, mid, left)
        split(mid, hi, n - left)

    total = count_real_roots(poly, -bound, bound)
    split(-bound, bound, total)
    return sorted(out)


@lru_cache(maxsize=512)
def _root_separation(coeffs: tuple) -> Fraction:
    """Positive lower bound for pairwise distances of distinct complex roots.

    Mahler's bound with |disc| >= 1 (irreducible, hence squarefree integer
    polynomial) coarsened to rational arithmetic:
    sep > 1 / (d^(d+2) * ((d+1) H^2)^(d-1)).
    """
    d = len(coeffs) - 1
    if d <= 1:
        return Fraction(1)
    h = max(abs(c) for c in coeffs)
    return Fraction(1, d ** (d + 2) * ((d + 1) * h * h) ** (d - 1))


# ---------------------------------------------------------------------------
# real algebraic numbers
# ---------------------------------------------------------------------------

class RealAlgebraic:
    """A real algebraic number: minimal polynomial + isolating interval."""

    __slots__ = ("minpoly", "lo", "hi", "_rational", "_index")

    def __init__(self, minpoly: IntPolynomial, lo, hi, validate: bool = True):
        self.minpoly = minpoly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._index = None
        if validate:
            if not minpoly.is_irreducible():
                raise ValueError("minimal polynomial must be irreducible")
            if minpoly.degree > 1 and count_real_roots(minpoly, self.lo, self.hi) != 1:
                raise ValueError("isolator must contain exactly one root")
        self._rational = None
        if minpoly.degree == 1:
            b, a = minpoly.coeffs[1], minpoly.coeffs[0]
            self._rational = Fraction(-a, b)
            self.lo = self.hi = self._rational

    @classmethod
    def from_rational(cls, q) -> "RealAlgebraic":
        q = Fraction(q)
        poly = IntPolynomial([-q.numerator, q.denominator])
        return cls(poly, q, q, validate=False)

    @classmethod
    def nth_root(cls, q, n: int) -> "RealAlgebraic":
        """The positive real n-th root of a positive rational."""
        q = Fraction(q)
        if q <= 0:
            raise ValueError("positive rationals only")
        base = Poly([q.denominator] + [0] * (n - 1) + [-q.numerator], _X)
        _, factors = factor_list(base)
        for f, _m in factors:
            poly = IntPolynomial(list(reversed([int(c) for c in f.all_coeffs()])))
            for lo, hi in isolate_real_roots(poly):
                if hi > 0:
                    cand = cls(poly, lo, hi, validate=False)
                    if cand._nth_power_equals(n, q):
                        return cand
        raise ValueError("no positive real root found")

    def _nth_power_equals(self, n: int, q: Fraction) -> bool:
        width = Fraction(1, 10 ** 9)
        lo, hi = self.refine(width)
        if lo <= 0:
            return False
        return lo ** n <= q <= hi ** n

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def is_rational(self) -> bool:
        return self._rational is not None

    def as_rational(self) -> Fraction:
        if self._rational is None:
            raise ValueError("not rational")
        return self._rational

    def __repr__(self):
        return (f"RealAlgebraic({list(self.minpoly.coeffs)}, "
                f"[{self.lo}, {self.hi}])")

    def root_index(self) -> int:
        """Index of this root among the real roots of minpoly (stable)."""
        if self._index is None:
            if self._rational is not None:
                self._index = 0
            else:
                bound = self.minpoly.cauchy_root_bound()
                self.refine(_root_separation(self.minpoly.coeffs) / 4)
                self._index = count_real_roots(self.minpoly, -bound, self.lo)
        return self._index

    def refine(self, width) -> tuple[Fraction, Fraction]:
        """Shrink the isolator below ``width``; never changes the root."""
        width = Fraction(width)
        if self._rational is not None:
            return self.lo, self.hi
        lo, hi = self.lo, self.hi
        if hi - lo <= width:
            return lo, hi
        slo = self.minpoly(lo)
        # an irreducible minpoly of degree > 1 has no rational roots, so
        # endpoint signs are well defined and nonzero
        while hi - lo > width:
            mid = (lo + hi) / 2
            v = self.minpoly(mid)
            if (v > 0) == (slo > 0):
                lo, slo = mid, v
            else:
                hi = mid
        self.lo, self.hi = lo, hi
        return lo, hi

    def float_enclosure(self) -> tuple[float, float]:
        lo, hi = self.refine(Fraction(1, 10 ** 13))
        return float(lo), float(hi)

    def __float__(self) -> float:
        lo, hi = self.float_enclosure()
        return 0.5 * (lo + hi)

    def sign(self) -> int:
        if self._rational is not None:
            q = self._rational
            return (q > 0) - (q < 0)
        # irrational algebraic is never 0, so bisection separates from 0
        lo, hi = self.lo, self.hi
        while lo < 0 < hi:
            lo, hi = self.refine((hi - lo) / 4)
        return 1 if lo >= 0 else -1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._rational is not None and self._rational == Fraction(other)
        if not isinstance(other, RealAlgebraic):
            return NotImplemented
        if self.minpoly != other.minpoly:
            return False
        if self._rational is not None:
            return self._rational == other._rational
        return self.root_index() == other.root_index()

    def __hash__(self):
        if self._rational is not None:
            return hash(self._rational)
        return hash((self.minpoly, self.root_index()))


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------

@dataclass
class HeightValue:
    """Height with certified enclosure; exact form kept when available."""

    lo: Fraction
    hi: Fraction
    exact: PowerProduct | None = None

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __repr__(self):
        if self.exact is not None:
            return f"HeightValue(exact={self.exact!r})"
        return f"HeightValue([{float(self.lo)}, {float(self.hi)}])"

    def leq(self, bound) -> bool:
        """Certified h <= bound for an exact rational bound."""
        bound = Fraction(bound)
        if self.exact is not None:
            return bound > 0 and self.exact <= pp(bound)
        return self.hi <= bound

    def geq(self, bound) -> bool:
        bound = Fraction(bound)
        if self.exact is not None:
            return bound <= 0 or self.exact >= pp(bound)
        return self.lo >= bound


def height_rational(q) -> HeightValue:
    """H(a/b) = max(|a|, b) for a/b in lowest terms."""
    q = Fraction(q)
    h = Fraction(max(abs(q.numerator), q.denominator))
    return HeightValue(h, h, exact=pp(h))


def _is_cyclotomic(poly: IntPolynomial) -> bool:
    d = poly.degree
    if poly.coeffs[-1] != 1:
        return False
    target = poly.sympy_poly()
    m = 1
    while m <= 4 * d * d + 4:
        if totient(m) == d and target == Poly(cyclotomic_poly(m, _X), _X):
            return True
        m += 1
    return False


def _certified_root_disks(poly: IntPolynomial, prec: int):
    """(center, radius) complex disks, one per root, or None if not isolated.

    Weierstrass residual bound: with approximations w_i, each disk
    |z - w_i| <= deg * |P(w_i)| / (|lc| * prod_{j != i} |w_i - w_j|)
    contains a root; pairwise-disjoint disks then isolate all of them.
    """
    d = poly.degree
    mp = mpmath.mp.clone()
    mp.prec = prec
    coeffs_desc = [mp.mpf(c) for c in reversed(poly.coeffs)]
    try:
        roots = mp.polyroots(coeffs_desc, maxsteps=200, extraprec=prec)
    except Exception:  # noqa: BLE001 - mpmath raises bare exceptions
        return None
    roots = [mp.mpc(r) for r in roots]
    lc = abs(coeffs_desc[0])
    # mpf rounds to nearest; inflate radii to absorb the (tiny) accumulated
    # arithmetic error of the residual formula
    slack = 1 + mp.mpf(2) ** (-(prec // 2))
    disks = []
    for i, w in enumerate(roots):
        pw = mp.polyval(coeffs_desc, w)
        prod = mp.mpf(1)
        for j, w2 in enumerate(roots):
            if j != i:
                prod *= abs(w - w2)
        if prod == 0:
            return None
        disks.append((w, d * abs(pw) / (lc * prod) * slack))
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            if abs(disks[i][0] - disks[j][0]) <= disks[i][1] + disks[j][1]:
                return None
    return disks


def height_algebraic(q: RealAlgebraic, precision: int = 64) -> HeightValue:
    """Absolute Weil height (p0 * prod max(1, |z|))^(1/deg P)."""
    if q.is_rational():
        return height_rational(q.as_rational())
    poly = q.minpoly
    d = poly.degree
    if _is_cyclotomic(poly):
        one = Fraction(1)
        return HeightValue(one, one, exact=PowerProduct.one())
    prec = max(64, precision + 16)
    while prec <= _MAX_PREC:
        disks = _certified_root_disks(poly, prec)
        if disks is not None:
            mp = mpmath.mp.clone()
            mp.prec = prec
            all_outside = True
            all_inside = True
            measure_lo = mp.mpf(poly.leading)
            measure_hi = mp.mpf(poly.leading)
            undecided = False
            for center, radius in disks:
                alo = abs(center) - radius
                ahi = abs(center) + radius
                if alo > 1:
                    all_inside = False
                    measure_lo *= alo
                    measure_hi *= ahi
                elif ahi < 1:
                    all_outside = False
                else:
                    undecided = True
                    break
            if not undecided:
                if all_outside:
                    # product of all |roots| is |P(0)|/lc, so measure = |P(0)|
                    exact = pp(Fraction(abs(poly.coeffs[0]))) ** Fraction(1, d)
                    lo, hi = exact.enclosure(max(precision, 64))
                    return HeightValue(lo, hi, exact=exact)
                if all_inside:
                    exact = pp(Fraction(poly.leading)) ** Fraction(1, d)
                    lo, hi = exact.enclosure(max(precision, 64))
                    return HeightValue(lo, hi, exact=exact)
                iv = MPIntervalContext()
                iv.prec = prec
                enc = iv.mpf([measure_lo, measure_hi]) ** (iv.mpf(1) / iv.mpf(d))
                from mpmath.libmp import to_rational
                plo, qlo = to_rational(enc._mpi_[0])
                phi_, qhi = to_rational(enc._mpi_[1])
                lo = Fraction(int(plo), int(qlo))
                hi = Fraction(int(phi_), int(qhi))
                if hi - lo <= Fraction(1, 2 ** precision) * max(1, hi):
                    return HeightValue(lo, hi)
        prec *= 2
    raise PrecisionExhausted(
        f"cannot separate roots of {poly!r} from the unit circle")


def height_of(c, precision: int = 64) -> HeightValue:
    if isinstance(c, RealAlgebraic):
        return height_algebraic(c, precision)
    return height_rational(c)


def height_point(coords, precision: int = 64) -> HeightValue:
    """Height of a vector: max of the coordinate heights."""
    hs = [height_of(c, precision) for c in coords]
    best = hs[0]
    for h in hs[1:]:
        if h.lo > best.hi:
            best = h
        elif best.lo > h.hi:
            continue
        elif h.exact is not None and best.exact is not None:
            if h.exact > best.exact:
                best = h
        elif h.hi > best.hi:
            best = h
    return best


# ---------------------------------------------------------------------------
# field degree of a tuple (compositum via resultants)
# ---------------------------------------------------------------------------

def _interval_eval_desc(coeffs_desc, lo: Fraction, hi: Fraction):
    """Horner over a Fraction interval; returns (lo, hi) of the range hull."""
    vlo, vhi = Fraction(0), Fraction(0)
    for c in coeffs_desc:
        c = Fraction(c)
        cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands) + c, max(cands) + c
    return vlo, vhi


def _sum_minpoly(p1: IntPolynomial, p2: IntPolynomial, lam: int):
    """Integer polynomial with alpha + lam*beta among its roots."""
    t, y = Symbol("t"), Symbol("y")
    a = p1.sympy_poly().as_expr().subs(_X, y)
    b = (p2.sympy_poly().as_expr().subs(_X, (t - y) / lam)
         * lam ** p2.degree).expand()
    return Poly(resultant(a, b, y), t)


def _identify_factor(rp: Poly, lo: Fraction, hi: Fraction):
    """The unique irreducible factor whose interval evaluation spans 0."""
    _, factors = factor_list(rp)
    hits = []
    for f, _m in factors:
        cs = [Fraction(c) for c in f.all_coeffs()]
        vlo, vhi = _interval_eval_desc(cs, lo, hi)
        if vlo <= 0 <= vhi:
            hits.append(f)
    return hits


def primitive_element(a: RealAlgebraic, b: RealAlgebraic) -> RealAlgebraic:
    """A generator of Q(a, b) of the form a + lam*b with certified degree."""
    bound = a.degree * b.degree
    best = None
    for lam in range(1, bound * bound + 2):
        rp = _sum_minpoly(a.minpoly, b.minpoly, lam)
        width = Fraction(1, 10 ** 6)
        for _attempt in range(40):
            alo, ahi = a.refine(width)
            blo, bhi = b.refine(width)
            lo = alo + lam * blo
            hi = ahi + lam * bhi
            hits = _identify_factor(rp, lo, hi)
            if len(hits) == 1:
                poly = IntPolynomial(list(reversed([int(c) for c in hits[0].all_coeffs()])))
                if count_real_roots(poly, lo, hi) == 1:
                    cand = RealAlgebraic(poly, lo, hi, validate=False)
                    if best is None or cand.degree > best.degree:
                        best = cand
                    break
            width /= 16
        if best is not None and best.degree == bound:
            return best
    if best is None:
        raise PrecisionExhausted("primitive element search failed")
    return best


def field_degree(coords) -> int:
    """[Q(x):Q] for a tuple of rationals/RealAlgebraic coordinates."""
    irr = [c for c in coords
           if isinstance(c, RealAlgebraic) and not c.is_rational()]
    if not irr:
        return 1
    gen = irr[0]
    for nxt in irr[1:]:
        if gen.minpoly == nxt.minpoly and gen == nxt:
            continue
        gen = primitive_element(gen, nxt)
    return gen.degree


# ---------------------------------------------------------------------------
# Liouville bounds
# ---------------------------------------------------------------------------

def liouville_lower_bound(f_coeffs: dict, x, precision: int = 64) -> Fraction:
    """(D_n(d) |f| H(x)^(dn))^(-[Q(x):Q]).

    ``f_coeffs`` maps exponent tuples to integer coefficients; ``x`` is a
    tuple of rationals/RealAlgebraic.  If f(x) != 0 then |f(x)| >= bound.
    Exact when H(x) is rational, else a certified lower bound (H rounded up).
    """
    n = len(x)
    d = max((sum(i) for i in f_coeffs), default=0)
    norm = max(abs(c) for c in f_coeffs.values())
    dn = math.comb(n + d, n)
    h = height_point(x, precision)
    e = field_degree(x)
    if h.exact is not None:
        exact = (pp(Fraction(dn * norm)) * h.exact ** (d * n)) ** (-e)
        if exact.is_rational():
            return exact.as_fraction()
        return exact.enclosure(max(64, precision))[0]
    return Fraction(1) / (Fraction(dn * norm) * h.hi ** (d * n)) ** e


def liouville_gap(q, qp, precision: int = 64) -> Fraction:
    """(2 H(q) H(q'))^(-e^2) <= |q - q'| whenever q != q'."""
    qa = q if isinstance(q, RealAlgebraic) else RealAlgebraic.from_rational(q)
    qb = qp if isinstance(qp, RealAlgebraic) else RealAlgebraic.from_rational(qp)
    if qa == qb:
        raise EqualInputs("inputs are equal")
    e = max(qa.degree, qb.degree)
    ha = height_algebraic(qa, precision)
    hb = height_algebraic(qb, precision)
    if ha.exact is not None and hb.exact is not None:
        exact = (pp(Fraction(2)) * ha.exact * hb.exact) ** (-(e * e))
        if exact.is_rational():
            return exact.as_fraction()
        return exact.enclosure(max(64, precision))[0]
    return Fraction(1) / (2 * ha.hi * hb.hi) ** (e * e)
