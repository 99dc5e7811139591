"""Auxiliary-polynomial pipeline: parameter selection, hypercube covers,
Taylor/Siegel matrices, and certified small-on-the-image polynomials.

Per cube V of a cover of (0,1)^k, the Taylor coefficients of the monomial
compositions phi^i at the cube's center feed the approximate Thue-Siegel
solver; the returned integer coefficient vector f gives a polynomial that is
certifiably small along phi on V, and exact arithmetic decides vanishing at
low-height algebraic points.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._kernels import aux_scan_batch, lll_reduce_f64
from .errors import (DegenerateRow, Diverged, SiegelFailed, SupBoundUnverified)
from .expr import Box, ExprAST, derivative_bound, eval_jet, is_polynomial
from .exactpow import PowerProduct, pp
from .heights import RealAlgebraic
from .jets import multiindices
from .lattice import SiegelInstance, approx_siegel, _canonical_sign

log = logging.getLogger(__name__)

_CHUNK = 8192  # cold-start boundary for the warm-started cube scan


def D(n: int, d: int) -> int:
    """Number of monomials in n variables of degree <= d."""
    return math.comb(n + d, n)


# ---------------------------------------------------------------------------
# parameter selection
# ---------------------------------------------------------------------------

def _induced_taylor_order(k: int, r: int, e: int, d: int) -> int:
    """The unique b with (e+1) D_k(b) <= D_{r+1}(d) < (e+1) D_k(b+1)."""
    import gmpy2
    target = D(r + 1, d)
    # C(b+k, k) <= target/(e+1): estimate b by the exact integer k-th root
    # of k! * target / (e+1), then adjust (at most a few steps off)
    est = int(gmpy2.iroot(math.factorial(k) * (target // (e + 1)), k)[0])
    b = max(est - k, 0)
    while (e + 1) * D(k, b + 1) <= target:
        b += 1
    while b > 0 and (e + 1) * D(k, b) > target:
        b -= 1
    return b


def choose_parameters(k: int, r: int, n: int, e: int, epsilon) -> tuple:
    """(d, b, lambda): least admissible degree, induced Taylor order,
    and the approximation exponent 4(r+1)ed."""
    epsilon = Fraction(epsilon)
    if not (1 <= k <= r <= n - 1):
        raise ValueError("need 1 <= k <= r <= n-1")
    if e < 1 or not 0 < epsilon <= 1:
        raise ValueError("need e >= 1 and epsilon in (0, 1]")
    d = (e + 1) * (r + 1) - 1
    cap = (r + 1) ** (2 * r + 1) * e ** r * (e + 1) \
        * math.comb(n, r + 1) ** r * (Fraction(1) / epsilon) ** r
    while True:
        b = _induced_taylor_order(k, r, e, d)
        if b > 0 and Fraction((k + 1) * (r + 1) * e * d, b) \
                <= epsilon / math.comb(n, r + 1):
            lam = 4 * (r + 1) * e * d
            if d > cap:
                raise AssertionError("degree exceeded its a-priori cap")
            return d, b, lam
        d += 1


@dataclass
class AuxParams:
    """Parameter bundle for one build at height bound T."""

    k: int
    n: int
    e: int
    d: int
    b: int
    lam: int
    T: Fraction
    c_prime: Fraction = Fraction(1)
    epsilon: Fraction | None = None

    def __post_init__(self):
        self.T = Fraction(self.T)
        self.c_prime = Fraction(self.c_prime)
        if not 0 < self.c_prime <= 1:
            raise ValueError("c_prime must lie in (0, 1]")
        if D(self.k, self.b) > D(self.n, self.d):
            raise ValueError("matrix needs D_k(b) <= D_n(d)")
        if not self.siegel_exponent_ok:
            # desk-scale bundles may run without the (e+1)-fold margin;
            # the Siegel hypothesis is still checked per build
            log.warning("D_n(d) < (e+1) D_k(b): exponent chain not covered")
        if not self.exponent_identity_holds():
            raise AssertionError("Q r^(b+1) != r^sigma")

    @property
    def siegel_exponent_ok(self) -> bool:
        return D(self.n, self.d) >= (self.e + 1) * D(self.k, self.b)

    @classmethod
    def from_selection(cls, k: int, r: int, n: int, e: int, epsilon, T,
                       c_prime=Fraction(1)) -> "AuxParams":
        d, b, lam = choose_parameters(k, r, n, e, epsilon)
        return cls(k, n, e, d, b, lam, Fraction(T), Fraction(c_prime),
                   epsilon=Fraction(epsilon))

    @classmethod
    def unconstrained(cls, k: int, n: int, e: int, d: int, b: int, T,
                      c_prime=Fraction(1)) -> "AuxParams":
        """User-supplied (d, b) for desk-scale runs; lambda = 4 n e d."""
        return cls(k, n, e, d, b, 4 * n * e * d, Fraction(T),
                   Fraction(c_prime))

    @property
    def r_exponent(self) -> Fraction:
        return Fraction((self.k + 1) * self.n * self.e * self.d,
                        self.k * self.b)

    @property
    def r_side(self) -> PowerProduct:
        return pp(self.c_prime) * pp(self.T) ** (-self.r_exponent)

    @property
    def Q(self) -> PowerProduct:
        expo = Fraction(self.b + self.k + 1, (self.e + 1) * (self.k + 1))
        return self.r_side ** (-expo)

    @property
    def Delta(self) -> PowerProduct:
        expo = Fraction(self.b, self.k + 1) * D(self.k, self.b)
        return self.r_side ** (-expo)

    @property
    def sigma(self) -> Fraction:
        return (Fraction(self.e * (self.b + self.k + 1),
                         (self.e + 1) * (self.k + 1))
                + Fraction(self.b * self.k, self.k + 1))

    @property
    def approx_exponent(self) -> Fraction:
        """The threshold exponent (k+1)ne/k * d(b+1)/b."""
        return Fraction((self.k + 1) * self.n * self.e * self.d * (self.b + 1),
                        self.k * self.b)

    def exponent_identity_holds(self) -> bool:
        return self.Q * self.r_side ** (self.b + 1) == self.r_side ** self.sigma


# ---------------------------------------------------------------------------
# hypercube covers
# ---------------------------------------------------------------------------

class GridCover:
    """Lazy per-axis grid of closed cubes covering (0,1)^k."""

    def __init__(self, k: int, step: Fraction, per_axis: int):
        self.k = k
        self.step = step
        self.per_axis = per_axis

    def __len__(self):
        return self.per_axis ** self.k

    def _axis_interval(self, j: int):
        return j * self.step, (j + 1) * self.step

    def indices(self, flat: int):
        out = []
        for _ in range(self.k):
            out.append(flat % self.per_axis)
            flat //= self.per_axis
        return tuple(out)

    def __getitem__(self, flat: int) -> Box:
        if not 0 <= flat < len(self):
            raise IndexError(flat)
        idx = self.indices(flat)
        los, his = zip(*(self._axis_interval(j) for j in idx))
        return Box(los, his)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def locate(self, point) -> int:
        """Flat index of a cube containing the point (ties to the left)."""
        flat = 0
        for i in reversed(range(self.k)):
            x = Fraction(point[i])
            j = min(int(x / self.step), self.per_axis - 1)
            if j > 0 and x == j * self.step:
                j -= 1  # boundary point: either cube works; pick the left
            flat = flat * self.per_axis + j
        return flat


def _ceil_inverse(r_side: PowerProduct) -> int:
    """ceil(1 / r_side), exact."""
    inv = r_side ** Fraction(-1)
    if inv.is_rational():
        return math.ceil(inv.as_fraction())
    lo, hi = inv.enclosure(128)
    cand = int(math.floor(lo))
    # verify cand < inv <= cand+1 exactly
    while not inv > cand:
        cand -= 1
    while inv > cand + 1:
        cand += 1
    return cand + 1


def hypercube_cover(k: int, r_side) -> GridCover:
    """Closed cubes of side <= r_side covering (0,1)^k.

    Rational side: anchors j*r for j = 0..ceil(1/r) (the last cube may
    protrude past 1).  Irrational side (a PowerProduct): side 1/M with
    M = ceil(1/r).  Count <= (1 + 1/r)^k either way.
    """
    if isinstance(r_side, PowerProduct):
        if r_side >= 1:
            return GridCover(k, Fraction(1), 1)
        m = _ceil_inverse(r_side)
        return GridCover(k, Fraction(1, m), m)
    r = Fraction(r_side)
    if r <= 0:
        raise ValueError("side must be positive")
    if r >= 1:
        return GridCover(k, Fraction(1), 1)
    m = math.ceil(Fraction(1) / r)
    return GridCover(k, r, m + 1)


def _center_in_domain(cube: Box) -> tuple | None:
    """Cube midpoint clipped into cube ∩ (0,1)^k; None if that is empty."""
    zs = []
    for lo, hi in zip(cube.lo, cube.hi):
        lo2, hi2 = max(lo, Fraction(0)), min(hi, Fraction(1))
        if lo2 >= hi2:
            return None
        zs.append((lo2 + hi2) / 2)
    return tuple(zs)


# ---------------------------------------------------------------------------
# Taylor/Siegel matrices
# ---------------------------------------------------------------------------

def _monomial_jets(phis, center, d: int, b: int, precision: int):
    """Jets of phi^i at the center for all |i| <= d, in graded-lex order."""
    n = len(phis)
    k = phis[0].arity
    base = [eval_jet(phi, center, b, precision) for phi in phis]
    monos = multiindices(n, d)
    jets = {}
    for i in monos:
        jet = None
        for coord, power in enumerate(i):
            for _ in range(power):
                jet = base[coord] if jet is None else jet * base[coord]
        if jet is None:
            one = Fraction(1) if isinstance(base[0].value(), Fraction) else \
                base[0].value() * 0 + 1
            from .jets import Jet
            jet = Jet.constant(k, b, one)
        jets[i] = jet
    return monos, jets


def _coeff_mid_rad(c):
    if c is None:
        return Fraction(0), Fraction(0)
    if isinstance(c, Fraction):
        return c, Fraction(0)
    lo, hi = c.to_fractions()
    return (lo + hi) / 2, (hi - lo) / 2


def taylor_siegel_matrix(phis, cube: Box, params: AuxParams,
                         precision: int = 64):
    """SiegelInstance for one cube: rows indexed by |alpha| <= b, columns by
    monomials |i| <= d, each row scaled to Euclidean norm r^-(b-|alpha|)."""
    center = _center_in_domain(cube)
    if center is None:
        raise SiegelFailed("cube does not meet (0,1)^k")
    monos, jets = _monomial_jets(phis, center, params.d, params.b, precision)
    alphas = multiindices(params.k, params.b)
    vecs = []
    scales = []
    rads = []
    dropped = 0
    for a in alphas:
        mids = []
        rad = Fraction(0)
        for i in monos:
            m, r_ = _coeff_mid_rad(jets[i].coefficient(a))
            mids.append(m)
            rad = max(rad, r_)
        if all(m == 0 for m in mids) and rad == 0:
            dropped += 1
            log.warning("dropping all-zero Taylor row alpha=%s", a)
            continue
        norm_sq = sum(m * m for m in mids)
        scale = (params.r_side ** (-(params.b - sum(a)))
                 * pp(norm_sq) ** Fraction(-1, 2))
        vecs.append(tuple(mids))
        scales.append(scale)
        rads.append(rad)
    if not vecs:
        raise DegenerateRow("all Taylor rows vanished")
    if dropped:
        log.warning("dropped %d degenerate rows; Delta recomputed", dropped)
    inst = SiegelInstance(vecs, scales, params.Q,
                          rads if any(rads) else None)
    return inst, monos, alphas, center, jets


# ---------------------------------------------------------------------------
# certified sup bounds
# ---------------------------------------------------------------------------

def _upper_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, PowerProduct):
        return x.enclosure(96)[1]
    raise TypeError(type(x))


def _lower_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, PowerProduct):
        return x.enclosure(96)[0]
    raise TypeError(type(x))


@lru_cache(maxsize=64)
def _c_constants(k: int, n: int, e: int, d: int, b: int, M: int, N: int,
                 B_num: Fraction):
    """The proof's constants: c1 = (2 sqrt N)^(N/M), c2, c3, c4 = c2 + c3."""
    c1 = pp(4 * N) ** Fraction(N, 2 * M)
    c1_hi = c1.enclosure(96)[1]
    dk = D(k, b)
    dn = D(n, d)
    sqrt_dn_hi = (pp(dn) ** Fraction(1, 2)).enclosure(96)[1]
    c2_hi = c1_hi * dk * sqrt_dn_hi * B_num ** d * Fraction(d) ** b
    c3 = (math.comb(k + b, k - 1) * dn) * B_num ** d * Fraction(d) ** (b + 1)
    return c2_hi, Fraction(c3), c2_hi + Fraction(c3)


def _r_sigma_lower(params: AuxParams) -> Fraction:
    v = params.r_side ** params.sigma
    if v.is_rational():
        return v.as_fraction()
    return v.enclosure(96)[0]


def sup_certificate(inst: SiegelInstance, f, params: AuxParams,
                    bound_B: Fraction, alphas):
    """(value_upper, target_lower, ok): certify |f(phi(z))| <= c4 r^sigma.

    The main part is the achieved row residuals weighted by r^|alpha|; the
    Lagrange remainder uses the proof's c3 with the achieved |f|.
    """
    r_up = _upper_fraction(params.r_side)
    main = Fraction(0)
    for idx, a in enumerate(alphas):
        if idx >= inst.M:
            break
        dot = abs(inst.row_dot(idx, f))
        if inst.rads is not None:
            dot += inst.rads[idx] * sum(abs(x) for x in f)
        main += dot * r_up ** sum(a)
    c2_hi, c3, c4 = _c_constants(params.k, params.n, params.e, params.d,
                                 params.b, inst.M, inst.N, bound_B)
    sup_f = max(abs(x) for x in f)
    remainder = c3 * sup_f * r_up ** (params.b + 1)
    value = main + remainder
    target = c4 * _r_sigma_lower(params)
    return value, target, value <= target


# ---------------------------------------------------------------------------
# output records
# ---------------------------------------------------------------------------

class AuxPolynomial:
    """Integer polynomial attached to one cube of the cover."""

    __slots__ = ("coeffs", "monomials", "cube_index", "cover", "sup_bound",
                 "sup_target", "mode", "coeff_bound_ok", "vacuous",
                 "vanishes_on_image")

    def __init__(self, coeffs, monomials, cube_index, cover, sup_bound,
                 sup_target, mode, coeff_bound_ok, vacuous=False,
                 vanishes_on_image=False):
        self.coeffs = tuple(int(c) for c in coeffs)
        self.monomials = monomials
        self.cube_index = cube_index
        self.cover = cover
        self.sup_bound = sup_bound
        self.sup_target = sup_target
        self.mode = mode
        self.coeff_bound_ok = coeff_bound_ok
        self.vacuous = vacuous
        self.vanishes_on_image = vanishes_on_image

    @property
    def cube(self) -> Box:
        return self.cover[self.cube_index]

    @property
    def sup_norm(self) -> int:
        return max(abs(c) for c in self.coeffs)

    def coeff_map(self) -> dict:
        return {m: c for m, c in zip(self.monomials, self.coeffs) if c != 0}

    def normalized(self) -> dict:
        """f / |f| with exact rational coefficients."""
        s = self.sup_norm
        return {m: Fraction(c, s) for m, c in zip(self.monomials, self.coeffs)
                if c != 0}

    def evaluate(self, point) -> Fraction:
        """Exact value at a rational point."""
        total = Fraction(0)
        for mono, c in zip(self.monomials, self.coeffs):
            if c == 0:
                continue
            term = Fraction(c)
            for x, power in zip(point, mono):
                term *= Fraction(x) ** power
            total += term
        return total

    def __repr__(self):
        return (f"AuxPolynomial(cube={self.cube_index}, coeffs={self.coeffs}, "
                f"mode={self.mode!r})")


def verify_vanishing(poly, q) -> bool:
    """Exact decision of f(q) = 0 at rational/real-algebraic coordinates."""
    coeffs = poly.coeff_map() if isinstance(poly, AuxPolynomial) else dict(poly)
    if all(isinstance(x, (int, Fraction)) or
           (isinstance(x, RealAlgebraic) and x.is_rational()) for x in q):
        pt = [x.as_rational() if isinstance(x, RealAlgebraic) else Fraction(x)
              for x in q]
        total = Fraction(0)
        for mono, c in coeffs.items():
            term = Fraction(c)
            for x, power in zip(pt, mono):
                term *= x ** power
            total += term
        return total == 0
    # certified interval evaluation against the Liouville threshold: an
    # algebraic value below its own Liouville bound must be exactly zero
    from .heights import liouville_lower_bound
    bound = liouville_lower_bound(coeffs, list(q))
    width = Fraction(1, 2 ** 64)
    for _ in range(8):
        lo, hi = _interval_eval_poly(coeffs, q, width)
        if lo > 0 or hi < 0:
            return False
        if max(abs(lo), abs(hi)) < bound:
            return True
        width /= 2 ** 32
    raise Diverged("vanishing test did not converge")


def _interval_eval_poly(coeffs, q, width):
    los, his = [], []
    for x in q:
        if isinstance(x, RealAlgebraic):
            lo, hi = x.refine(width)
        else:
            lo = hi = Fraction(x)
        los.append(lo)
        his.append(hi)
    tot_lo, tot_hi = Fraction(0), Fraction(0)
    for mono, c in coeffs.items():
        t_lo, t_hi = Fraction(c), Fraction(c)
        for lo, hi, power in zip(los, his, mono):
            p_lo, p_hi = _pow_interval(lo, hi, power)
            cands = (t_lo * p_lo, t_lo * p_hi, t_hi * p_lo, t_hi * p_hi)
            t_lo, t_hi = min(cands), max(cands)
        tot_lo += t_lo
        tot_hi += t_hi
    return tot_lo, tot_hi


def _pow_interval(lo: Fraction, hi: Fraction, power: int):
    if power == 0:
        return Fraction(1), Fraction(1)
    if power % 2 == 1 or lo >= 0:
        return lo ** power, hi ** power
    if hi <= 0:
        return hi ** power, lo ** power
    return Fraction(0), max(lo ** power, hi ** power)


# ---------------------------------------------------------------------------
# the cube scan
# ---------------------------------------------------------------------------

def _poly_coeff_lists(phis) -> list[list[Fraction]]:
    """Each polynomial phi_j of one variable as an ascending coeff list."""
    out = []
    for phi in phis:
        jet = eval_jet(phi, [Fraction(0)], _poly_degree_bound(phi))
        degmax = _poly_degree_bound(phi)
        out.append([jet.coefficient((i,)) or Fraction(0)
                    for i in range(degmax + 1)])
    return out


def _poly_degree_bound(phi: ExprAST) -> int:
    from .expr import BinOp, Const, Func, Neg, PiConst, Pow, Var

    def walk(node):
        if isinstance(node, (Const, PiConst)):
            return 0
        if isinstance(node, Var):
            return 1
        if isinstance(node, Neg):
            return walk(node.arg)
        if isinstance(node, BinOp):
            if node.op in "+-":
                return max(walk(node.left), walk(node.right))
            return walk(node.left) + walk(node.right)
        if isinstance(node, Pow):
            return walk(node.base) * max(int(node.exponent), 0)
        if isinstance(node, Func):
            raise ValueError("not polynomial")
        raise TypeError(node)

    return walk(phi.root)


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _compose_f_phi(coeff_map, phi_lists):
    """f(phi_1(z), ..., phi_n(z)) as an exact coefficient list in z."""
    total = [Fraction(0)]
    for mono, c in coeff_map.items():
        term = [Fraction(c)]
        for j, power in enumerate(mono):
            for _ in range(power):
                term = _poly_mul(term, phi_lists[j])
        if len(term) > len(total):
            total += [Fraction(0)] * (len(term) - len(total))
        for i, v in enumerate(term):
            total[i] += v
    return total


def build_aux_polynomials(phis, T, params: AuxParams, mode: str = "reduced",
                          precision: int = 64, progress=None):
    """One AuxPolynomial per cube of the cover of (0,1)^k.

    Fast path for one-dimensional polynomial parametrizations; the general
    path runs the Siegel solver cube by cube on interval jets.
    """
    if hasattr(phis, "phi"):
        phis = phis.phi
    if Fraction(T) != params.T:
        raise ValueError("T disagrees with the parameter bundle")
    # Lemma hypothesis at the bundle level (row norms are exactly the
    # r powers, so Delta is params.Delta)
    nn = D(params.n, params.d)
    hyp_rhs = pp(4 * nn) ** Fraction(1, 2) * params.Delta ** Fraction(1, nn)
    if not params.Q >= hyp_rhs:
        from .errors import HypothesisViolated
        raise HypothesisViolated(
            "Q below 2 sqrt(N) Delta^(1/N); shrink c_prime or raise T")
    cover = hypercube_cover(params.k, params.r_side)
    bound_B = derivative_bound(phis, Box.unit(params.k), params.b + 1,
                               precision)
    if params.k == 1 and all(is_polynomial(phi) for phi in phis) \
            and mode == "reduced":
        return _scan_poly_1d(phis, params, cover, bound_B, progress)
    return _scan_general(phis, params, cover, bound_B, mode, precision,
                         progress)


def _scan_general(phis, params, cover, bound_B, mode, precision, progress):
    out = []
    monos = multiindices(params.n, params.d)
    for idx in range(len(cover)):
        cube = cover[idx]
        if _center_in_domain(cube) is None:
            out.append(AuxPolynomial((1,) + (0,) * (len(monos) - 1), monos,
                                     idx, cover, Fraction(0), Fraction(0),
                                     "vacuous", True, vacuous=True))
            continue
        inst, _monos, alphas, _center, _jets = taylor_siegel_matrix(
            phis, cube, params, precision)
        sol = approx_siegel(inst, mode)
        value, target, ok = sup_certificate(inst, sol.f, params, bound_B,
                                            alphas)
        if not ok and mode != "exact" and inst.N <= 14:
            sol = approx_siegel(inst, "exact")
            value, target, ok = sup_certificate(inst, sol.f, params, bound_B,
                                                alphas)
        if not ok:
            raise SupBoundUnverified(
                f"cube {idx}: {float(value)} > {float(target)}")
        out.append(AuxPolynomial(sol.f, monos, idx, cover, value, target,
                                 sol.mode, sol.sup_bound_ok))
        if progress and idx % 64 == 0:
            progress(idx, len(cover))
    return out


def _scan_poly_1d(phis, params, cover, bound_B, progress):
    """Vectorized scan: float rows from closed-form Taylor coefficients,
    warm-started LLL per cube, then exact certification per distinct f."""
    n, d, b = params.n, params.d, params.b
    monos = multiindices(n, d)
    alphas = multiindices(1, b)
    M, N = len(alphas), len(monos)
    phi_lists = _poly_coeff_lists(phis)
    # composition polynomials phi^i for every monomial column
    col_polys = []
    for mono in monos:
        poly = [Fraction(1)]
        for j, power in enumerate(mono):
            for _ in range(power):
                poly = _poly_mul(poly, phi_lists[j])
        col_polys.append(poly)
    # raw coefficient of (z - zbar)^a in column i is q_{i,a}(zbar) where
    # q_{i,a}(z) = sum_p C(p, a) c_p z^(p-a)
    shift_polys = [[None] * (b + 1) for _ in range(N)]
    for ci, poly in enumerate(col_polys):
        for a in range(b + 1):
            shift_polys[ci][a] = [math.comb(p, a) * c
                                  for p, c in enumerate(poly)][a:] or [Fraction(0)]
    ncubes = len(cover)
    r_f = float(params.r_side)
    eps_f = _epsilon_float(params, M, N)
    centers = (np.arange(ncubes, dtype=np.float64) + 0.5) * float(cover.step)
    raw = np.zeros((ncubes, M, N))
    for ci in range(N):
        for a in range(b + 1):
            cs = np.array([float(c) for c in shift_polys[ci][a]])
            raw[:, a, ci] = _polyval_ascending(cs, centers)
    fs = np.zeros((ncubes, N), dtype=np.int64)
    weights = np.array([r_f ** (-(b - sum(a))) for a in alphas])
    aux_scan_batch(raw, weights, eps_f, fs, _CHUNK)
    if progress:
        progress(ncubes, ncubes)
    return _certify_poly_scan(fs, monos, alphas, cover, params, bound_B,
                              phi_lists, phis)


def _polyval_ascending(cs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(xs)
    for c in cs[::-1]:
        acc = acc * xs + c
    return acc


def _epsilon_float(params, M, N) -> float:
    eps = (pp(4 * N) ** Fraction(N, 2 * M) * params.Q ** (-Fraction(N, M))
           * params.Delta ** Fraction(1, M))
    return float(eps)


def _certify_poly_scan(fs, monos, alphas, cover, params, bound_B, phi_lists,
                       phis):
    ncubes = fs.shape[0]
    out = [None] * ncubes
    q_pp = params.Q
    c2_hi, c3, c4 = _c_constants(params.k, params.n, params.e, params.d,
                                 params.b, len(alphas), len(monos), bound_B)
    target = c4 * _r_sigma_lower(params)
    byf = {}
    for idx in range(ncubes):
        f = _canonical_sign(tuple(int(v) for v in fs[idx]))
        byf.setdefault(f, []).append(idx)
    for f, idxs in byf.items():
        if all(v == 0 for v in f):
            # degenerate scan result: redo these cubes exactly
            for idx in idxs:
                out[idx] = _exact_single_cube(phis, cover, idx, params,
                                              bound_B, monos, alphas)
            continue
        coeffs = dict(zip(monos, f))
        comp = _compose_f_phi({m: c for m, c in coeffs.items() if c},
                              phi_lists)
        vanishes = all(c == 0 for c in comp)
        sup_ok = q_pp >= max(abs(v) for v in f)
        if vanishes:
            for idx in idxs:
                out[idx] = AuxPolynomial(f, monos, idx, cover, Fraction(0),
                                         target, "reduced", sup_ok,
                                         vanishes_on_image=True)
            continue
        for idx in idxs:
            out[idx] = _exact_certify_cube(phis, cover, idx, params, bound_B,
                                           monos, alphas, f, sup_ok, target)
    return out


def _exact_certify_cube(phis, cover, idx, params, bound_B, monos, alphas, f,
                        sup_ok, target):
    inst, monos2, alphas2, _c, _j = taylor_siegel_matrix(
        phis, cover[idx], params)
    value, tgt, ok = sup_certificate(inst, f, params, bound_B, alphas2)
    if not ok:
        return _exact_single_cube(phis, cover, idx, params, bound_B, monos,
                                  alphas)
    return AuxPolynomial(f, monos, idx, cover, value, tgt, "reduced", sup_ok)


def _exact_single_cube(phis, cover, idx, params, bound_B, monos, alphas):
    cube = cover[idx]
    if _center_in_domain(cube) is None:
        return AuxPolynomial((1,) + (0,) * (len(monos) - 1), monos, idx,
                             cover, Fraction(0), Fraction(0), "vacuous",
                             True, vacuous=True)
    inst, monos2, alphas2, _c, _j = taylor_siegel_matrix(phis, cube, params)
    sol = approx_siegel(inst, "exact")
    value, target, ok = sup_certificate(inst, sol.f, params, bound_B, alphas2)
    if not ok:
        raise SupBoundUnverified(f"cube {idx} failed after exact escalation")
    return AuxPolynomial(sol.f, monos, idx, cover, value, target, "exact",
                         sol.sup_bound_ok)
