"""Minimal nonzero modulus of coefficient-weighted sums of N-th roots of
unity, exact vanishing detection, the sparse-prime scan, and vanishing
subsum diagnostics.

Zero detection is exact for rational (and Gaussian-rational) coefficients:
the sum vanishes iff the exponent polynomial is divisible by the N-th
cyclotomic polynomial; for prime N with equal coefficients this reduces to
all residue classes being hit equally often.  Nonzero values are certified
by interval arithmetic with adaptive precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational
from sympy import Poly, Symbol, cyclotomic_poly, primerange

from ._kernels import roots_collect_near, roots_min_scan
from .errors import BudgetExceeded, PrecisionExhausted
from .exactpow import pp

_X = Symbol("x")
_DEFAULT_BUDGET = 30_000_000
_ZERO_TOL = 1e-12  # float |s|^2 below this is a zero candidate, far above
                   # the ~1e-28 arithmetic error of a handful of terms


@dataclass
class RootSumInstance:
    """Modulus N and coefficients a_0..a_n (a_0 attached to the fixed root 1).

    Coefficients are Fractions, (re, im) Gaussian-rational pairs, or
    ((re_lo, re_hi), (im_lo, im_hi)) certified complex enclosures.
    """

    N: int
    coeffs: list

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N >= 1")
        if len(self.coeffs) < 1:
            raise ValueError("need a_0")
        self.coeffs = [_normalize_coeff(c) for c in self.coeffs]
        for c in self.coeffs:
            if _is_certainly_zero(c):
                raise ValueError("coefficients must be nonzero")

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def is_exact(self) -> bool:
        return all(kind == "gauss" for kind, _ in self.coeffs)

    def float_parts(self):
        res, ims = [], []
        for kind, val in self.coeffs:
            if kind == "gauss":
                res.append(float(val[0]))
                ims.append(float(val[1]))
            else:
                (rlo, rhi), (ilo, ihi) = val
                res.append(0.5 * float(rlo + rhi))
                ims.append(0.5 * float(ilo + ihi))
        return res, ims

    def groups(self) -> tuple:
        """Run lengths of equal coefficients among a_1..a_n (sorted tuples
        within a run exploit the permutation symmetry)."""
        out = []
        prev = None
        for c in self.coeffs[1:]:
            if prev is not None and c == prev:
                out[-1] += 1
            else:
                out.append(1)
            prev = c
        return tuple(out)


def _normalize_coeff(c):
    if isinstance(c, tuple) and len(c) == 2 and isinstance(c[0], tuple):
        (rlo, rhi), (ilo, ihi) = c
        return ("enclosure", ((Fraction(rlo), Fraction(rhi)),
                              (Fraction(ilo), Fraction(ihi))))
    if isinstance(c, tuple) and len(c) == 2:
        return ("gauss", (Fraction(c[0]), Fraction(c[1])))
    return ("gauss", (Fraction(c), Fraction(0)))


def _is_certainly_zero(coeff) -> bool:
    kind, val = coeff
    if kind == "gauss":
        return val == (0, 0)
    (rlo, rhi), (ilo, ihi) = val
    return rlo == rhi == ilo == ihi == 0


@dataclass
class MinSumResult:
    value_lo: Fraction
    value_hi: Fraction
    argmin: tuple
    zeros_found: int
    pruned: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return 0.5 * float(self.value_lo + self.value_hi)


# ---------------------------------------------------------------------------
# exact zero test
# ---------------------------------------------------------------------------

def _exponent_polys(inst: RootSumInstance, ks) -> tuple:
    """(A, B): rational polynomials with the sum = A(zeta) + i B(zeta)."""
    re = [Fraction(0)] * inst.N
    im = [Fraction(0)] * inst.N
    exps = (0,) + tuple(k % inst.N for k in ks)
    for (kind, val), k in zip(inst.coeffs, exps):
        if kind != "gauss":
            raise PrecisionExhausted(
                "exact zero test needs exact coefficients")
        re[k] += val[0]
        im[k] += val[1]
    return re, im


from functools import lru_cache


@lru_cache(maxsize=256)
def _residue_table(N: int) -> tuple:
    """x^k mod Phi_N for k = 0..N-1 as integer coefficient tuples."""
    cyc = [int(c) for c in
           reversed(Poly(cyclotomic_poly(N, _X), _X).all_coeffs())]
    deg = len(cyc) - 1
    rows = []
    cur = [0] * deg
    if deg > 0:
        cur[0] = 1
    for _k in range(N):
        rows.append(tuple(cur))
        # multiply by x modulo the monic cyclotomic polynomial
        top = cur[-1] if deg > 0 else 0
        nxt = [0] + cur[:-1]
        if top:
            for i in range(deg):
                nxt[i] -= top * cyc[i]
        cur = nxt
    return tuple(rows)


def _divisible_by_cyclotomic(coeffs, N: int) -> bool:
    if all(c == 0 for c in coeffs):
        return True
    table = _residue_table(N)
    deg = len(table[0])
    acc = [Fraction(0)] * deg
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        row = table[k % N]
        for i in range(deg):
            acc[i] += c * row[i]
    return all(v == 0 for v in acc)


def is_exact_zero(inst: RootSumInstance, ks) -> bool:
    """Exact: a_0 + sum a_j zeta^(k_j) = 0 with zeta = e^(2 pi i / N)."""
    N = inst.N
    re, im = _exponent_polys(inst, ks)
    if all(v == 0 for v in im):
        if _is_prime(N):
            # sum c_k zeta^k = 0 over prime N iff all c_k are equal
            return len(set(re)) == 1
        return _divisible_by_cyclotomic(re, N)
    if N % 4 == 0:
        # i = zeta^(N/4): fold into a single rational polynomial
        merged = re[:]
        shift = N // 4
        for k, v in enumerate(im):
            merged[(k + shift) % N] += v
        if _is_prime(N):
            return len(set(merged)) == 1
        return _divisible_by_cyclotomic(merged, N)
    # Q(i) and Q(zeta_N) are linearly disjoint: both parts must vanish
    if _is_prime(N):
        return len(set(re)) == 1 and len(set(im)) == 1
    return _divisible_by_cyclotomic(re, N) and _divisible_by_cyclotomic(im, N)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(n ** 0.5) + 1):
        if n % p == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# certified evaluation
# ---------------------------------------------------------------------------

def _certified_modulus(inst: RootSumInstance, ks, prec: int):
    """(lo, hi) Fractions enclosing |a_0 + sum a_j zeta^(k_j)|."""
    ctx = MPIntervalContext()
    ctx.prec = prec
    two_pi = 2 * ctx.pi
    re_total = ctx.mpf(0)
    im_total = ctx.mpf(0)
    exps = (0,) + tuple(k % inst.N for k in ks)
    for (kind, val), k in zip(inst.coeffs, exps):
        ang = two_pi * ctx.mpf(k) / ctx.mpf(inst.N)
        c, s = ctx.cos(ang), ctx.sin(ang)
        if kind == "gauss":
            ar = ctx.mpf(val[0].numerator) / ctx.mpf(val[0].denominator)
            ai = ctx.mpf(val[1].numerator) / ctx.mpf(val[1].denominator)
        else:
            (rlo, rhi), (ilo, ihi) = val
            ar = ctx.mpf([_mpq(ctx, rlo), _mpq(ctx, rhi)])
            ai = ctx.mpf([_mpq(ctx, ilo), _mpq(ctx, ihi)])
        re_total += ar * c - ai * s
        im_total += ar * s + ai * c
    mod = ctx.sqrt(re_total ** 2 + im_total ** 2)
    plo, qlo = to_rational(mod._mpi_[0])
    phi_, qhi = to_rational(mod._mpi_[1])
    return Fraction(int(plo), int(qlo)), Fraction(int(phi_), int(qhi))


def _mpq(ctx, q: Fraction):
    return ctx.mpf(q.numerator) / ctx.mpf(q.denominator)


# ---------------------------------------------------------------------------
# minimum scans
# ---------------------------------------------------------------------------

def min_sum(inst: RootSumInstance, budget: int = _DEFAULT_BUDGET,
            prune: bool = True, precision: int = 80) -> MinSumResult:
    """Least positive |a_0 + a_1 zeta_1 + ... + a_n zeta_n| over N-th roots.

    Enumerates sorted exponent tuples within runs of equal coefficients,
    classifies float-zero candidates exactly, and certifies the minimum by
    adaptive-precision interval evaluation.
    """
    n, N = inst.n, inst.N
    if n == 0:
        lo, hi = _certified_modulus(inst, (), precision)
        if lo <= 0:
            raise PrecisionExhausted("a_0 alone straddles zero")
        return MinSumResult(lo, hi, (), 0)
    groups = inst.groups()
    work = 1
    for size in groups:
        work *= math.comb(N + size - 1, size)
    if work > budget:
        raise BudgetExceeded(f"{work} tuples exceed budget {budget}")
    cre, cim = inst.float_parts()
    if prune:
        best_sq, _arg, _zf = roots_min_scan(cre, cim, N, groups, _ZERO_TOL, 1)
    else:
        from . import _kernels_py
        best_sq, _arg, _zf = _kernels_py.roots_min_scan(cre, cim, N, groups,
                                                        _ZERO_TOL)
    threshold = best_sq * (1 + 1e-6) if best_sq < math.inf else _ZERO_TOL
    near = roots_collect_near(cre, cim, N, groups, threshold, _ZERO_TOL)
    zeros = 0
    candidates = []
    for ks, _s_sq in near:
        if inst.is_exact() and is_exact_zero(inst, ks):
            zeros += 1
            continue
        candidates.append(ks)
    if not candidates:
        raise PrecisionExhausted("no nonzero sums found" if zeros else
                                 "scan returned nothing")
    # the true minimum lies among the candidates; the enclosure is the
    # pointwise min of tight per-candidate enclosures
    enclosures = []
    for ks in sorted(candidates):
        prec = precision
        prev_width = None
        while True:
            lo, hi = _certified_modulus(inst, ks, prec)
            width = hi - lo
            if lo > 0 and width < hi * Fraction(1, 10 ** 12):
                break
            if lo > 0 and prev_width is not None and width > prev_width / 2:
                # converged to the inherent radius of enclosure coefficients
                break
            if prec >= 64 * precision:
                raise PrecisionExhausted(
                    f"tuple {ks}: cannot separate enclosure from zero")
            prec *= 2
            prev_width = width
        enclosures.append((lo, hi, ks))
    value_lo = min(e[0] for e in enclosures)
    value_hi = min(e[1] for e in enclosures)
    argmin = min(enclosures, key=lambda e: (e[1], e[2]))[2]
    return MinSumResult(value_lo, value_hi, argmin, zeros,
                        pruned={"enumerated": work, "near_ties": len(near),
                                "pruning": bool(prune)})


def liouville_floor_check(inst: RootSumInstance, result: MinSumResult) -> bool:
    """f(n+1, N) > (n+1)^(-N) for all-ones coefficients."""
    if not all(kind == "gauss" and val == (1, 0)
               for kind, val in inst.coeffs):
        raise ValueError("floor check applies to all-ones coefficients")
    floor = Fraction(1, (inst.n + 1) ** inst.N)
    return result.value_lo > floor


def prime_scan(coeffs, lam, c, T: int, budget: int = _DEFAULT_BUDGET,
               precision: int = 80):
    """Primes p <= T whose minimal sum drops below c^(-1) p^(-lambda).

    Returns (qualifying, undecided, all_rows); qualifying entries carry the
    witness tuple and the orders of the witnessing roots of unity.
    """
    lam = Fraction(lam)
    c = Fraction(c)
    qualifying = []
    undecided = []
    rows = []
    for p in primerange(2, T + 1):
        inst = RootSumInstance(int(p), list(coeffs))
        res = min_sum(inst, budget=budget, precision=precision)
        thr = pp(Fraction(1) / c) * pp(int(p)) ** (-lam)
        t_lo, t_hi = (thr.as_fraction(),) * 2 if thr.is_rational() \
            else thr.enclosure(96)
        rows.append((int(p), res))
        if Fraction(res.value_hi) < t_lo:
            orders = [p // math.gcd(p, k) if k else 1 for k in res.argmin]
            qualifying.append({"p": int(p), "value": (res.value_lo,
                                                      res.value_hi),
                               "witness": res.argmin, "orders": orders})
        elif not Fraction(res.value_lo) >= t_hi:
            undecided.append(int(p))
    return qualifying, undecided, rows


def subsum_analysis(inst: RootSumInstance, ks) -> list:
    """All proper nonempty index subsets (0 = the a_0 term) whose subsum
    vanishes exactly."""
    if not inst.is_exact():
        raise PrecisionExhausted("subsum analysis needs exact coefficients")
    indices = list(range(inst.n + 1))
    out = []
    for mask in range(1, 2 ** len(indices) - 1):
        chosen = [i for i in indices if mask & (1 << i)]
        if _subsum_is_zero(inst, chosen, ks):
            out.append(tuple(chosen))
    return out


def _subsum_is_zero(inst: RootSumInstance, chosen, ks) -> bool:
    N = inst.N
    re = [Fraction(0)] * N
    im = [Fraction(0)] * N
    for i in chosen:
        k = 0 if i == 0 else ks[i - 1] % N
        val = inst.coeffs[i][1]
        re[k] += val[0]
        im[k] += val[1]
    if all(v == 0 for v in im):
        return _divisible_by_cyclotomic(re, N)
    if N % 4 == 0:
        merged = re[:]
        for k, v in enumerate(im):
            merged[(k + N // 4) % N] += v
        return _divisible_by_cyclotomic(merged, N)
    return _divisible_by_cyclotomic(re, N) and \
        _divisible_by_cyclotomic(im, N)
