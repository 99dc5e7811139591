"""Integer lattice reduction and the approximate Thue-Siegel solver.

The solver works on the augmented lattice [A; eps*I] (columns indexed by the
unknown integer vector f).  Exact mode finds a provably L2-shortest vector:
Minkowski's theorem puts the shortest vector under the bound
2 sqrt(N) Delta^(1/N) eps^(1-M/N), and both advertised sup-norm bounds
follow from that single L2 bound, so the shortest vector satisfies them
verbatim; both are still re-verified exactly before returning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._kernels import lll_reduce_f64
from .errors import DependentBasis, HypothesisViolated, SearchExhausted
from .exactpow import PowerProduct, pp

_EXACT_MODE_CAP = 14


# ---------------------------------------------------------------------------
# exact rational LLL (certified postconditions, for small inputs)
# ---------------------------------------------------------------------------

def _gso_exact(rows):
    n = len(rows)
    ortho = [list(map(Fraction, r)) for r in rows]
    mu = [[Fraction(0)] * n for _ in range(n)]
    norms = [Fraction(0)] * n
    for i in range(n):
        ortho[i] = list(map(Fraction, rows[i]))
        for j in range(i):
            if norms[j] == 0:
                raise DependentBasis("dependent basis vectors")
            mu[i][j] = _dot(rows[i], ortho[j]) / norms[j]
            ortho[i] = [a - mu[i][j] * b for a, b in zip(ortho[i], ortho[j])]
        norms[i] = _dot(ortho[i], ortho[i])
        if norms[i] == 0:
            raise DependentBasis("dependent basis vectors")
    return ortho, mu, norms


def _dot(a, b) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def lll_reduce(basis, delta=Fraction(3, 4)):
    """Exact LLL over the rationals; returns the reduced basis rows."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    rows = [list(map(Fraction, r)) for r in basis]
    n = len(rows)
    if n == 0:
        return []
    ortho, mu, norms = _gso_exact(rows)

    def recompute():
        nonlocal ortho, mu, norms
        ortho, mu, norms = _gso_exact(rows)

    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 100_000:
            raise RuntimeError("LLL failed to converge")
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q != 0:
                rows[k] = [a - q * b for a, b in zip(rows[k], rows[j])]
                recompute()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            rows[k], rows[k - 1] = rows[k - 1], rows[k]
            recompute()
            k = max(k - 1, 1)
    return [tuple(r) for r in rows]


# ---------------------------------------------------------------------------
# shortest vectors of an integer-combination lattice given float rows
# ---------------------------------------------------------------------------

def _fp_enumerate(B: np.ndarray, radius_sq: float, cap_nodes: int = 2_000_000):
    """All integer combinations x with |x . B|^2 <= radius_sq (float search).

    B rows are assumed LLL-reduced.  Returns candidate coefficient vectors;
    the caller re-verifies norms exactly.  Bounds carry a small relative
    slack so borderline vectors are not lost to rounding.
    """
    n = B.shape[0]
    G = B @ B.T
    mu = np.zeros((n, n))
    d = np.zeros(n)
    for i in range(n):
        d[i] = G[i, i] - sum(mu[i, j] ** 2 * d[j] for j in range(i))
        if d[i] <= 0:
            raise DependentBasis("dependent rows in enumeration")
        for j in range(i + 1, n):
            mu[j, i] = (G[j, i] - sum(mu[j, t] * mu[i, t] * d[t]
                                      for t in range(i))) / d[i]
    radius = radius_sq * (1 + 1e-9) + 1e-12
    out = []
    x = [0] * n
    centers = [0.0] * n
    partial = [0.0] * (n + 1)
    nodes = 0

    def rec(level):
        nonlocal nodes
        if nodes > cap_nodes:
            raise SearchExhausted("enumeration node budget exceeded")
        if level < 0:
            if any(x):
                out.append(tuple(x))
            return
        c = -sum(x[j] * mu[j, level] for j in range(level + 1, n))
        centers[level] = c
        rem = radius - partial[level + 1]
        if rem < 0:
            return
        half = math.sqrt(rem / d[level]) + 1e-9
        lo = math.ceil(c - half)
        hi = math.floor(c + half)
        for v in range(lo, hi + 1):
            nodes += 1
            x[level] = v
            partial[level] = partial[level + 1] + (v - c) ** 2 * d[level]
            if partial[level] <= radius:
                rec(level - 1)
        x[level] = 0

    rec(n - 1)
    return out


def shortest_vector_coeffs(gen_rows: np.ndarray):
    """Coefficient vectors of (near-)shortest lattice vectors.

    ``gen_rows`` holds the generating vectors as float rows.  Returns the
    integer transform U (rows = reduced-basis coefficients in terms of the
    generators) and the candidate coefficient list, shortest first.
    """
    n = gen_rows.shape[0]
    B = gen_rows.astype(float).copy()
    U = np.eye(n, dtype=np.int64)
    if lll_reduce_f64(B, U) < 0:
        raise OverflowError("float LLL coefficient overflow")
    norms = (B * B).sum(axis=1)
    rmin = float(norms.min())
    coeffs = _fp_enumerate(B, rmin)
    out = []
    for x in coeffs:
        f = tuple(int(v) for v in (np.array(x, dtype=object) @ U))
        out.append(f)
    return U, out


# ---------------------------------------------------------------------------
# Siegel instances
# ---------------------------------------------------------------------------

def _canonical_sign(f: tuple) -> tuple:
    for v in f:
        if v != 0:
            return f if v > 0 else tuple(-x for x in f)
    return f


@dataclass
class SiegelInstance:
    """M x N matrix A with rows scales[i] * vecs[i], plus the bound Q.

    ``rads[i]`` is an entrywise radius for enclosure-derived rows (the
    matrix used for lattice work is the midpoint snap; achieved bounds are
    re-checked against the worst case).
    """

    vecs: list
    scales: list
    Q: PowerProduct
    rads: list | None = None

    def __post_init__(self):
        self.vecs = [tuple(Fraction(v) for v in row) for row in self.vecs]
        self.scales = [s if isinstance(s, PowerProduct) else pp(Fraction(s))
                       for s in self.scales]
        if not isinstance(self.Q, PowerProduct):
            self.Q = pp(Fraction(self.Q))
        if self.rads is not None:
            self.rads = [Fraction(r) for r in self.rads]
        if self.M > self.N:
            raise ValueError("M <= N required")
        widths = {len(v) for v in self.vecs}
        if len(widths) != 1:
            raise ValueError("ragged matrix")

    @classmethod
    def from_matrix(cls, rows, Q) -> "SiegelInstance":
        return cls([tuple(map(Fraction, r)) for r in rows],
                   [PowerProduct.one()] * len(rows), Q)

    @property
    def M(self) -> int:
        return len(self.vecs)

    @property
    def N(self) -> int:
        return len(self.vecs[0])

    def row_norm(self, i: int) -> PowerProduct:
        s = sum(v * v for v in self.vecs[i])
        if s == 0:
            raise DependentBasis(f"zero row {i}")
        return self.scales[i] * pp(s) ** Fraction(1, 2)

    def delta(self) -> PowerProduct:
        out = PowerProduct.one()
        for i in range(self.M):
            out = out * self.row_norm(i)
        return out

    def validate_norms(self):
        for i in range(self.M):
            if not self.row_norm(i) >= 1:
                raise ValueError(f"row {i} has Euclidean norm < 1")

    def image_bound(self) -> PowerProduct:
        """(2 sqrt N)^(N/M) Q^(1 - N/M) Delta^(1/M)."""
        M, N = self.M, self.N
        return (pp(4 * N) ** Fraction(N, 2 * M)
                * self.Q ** (1 - Fraction(N, M))
                * self.delta() ** Fraction(1, M))

    def epsilon(self) -> PowerProduct:
        M, N = self.M, self.N
        return (pp(4 * N) ** Fraction(N, 2 * M)
                * self.Q ** (-Fraction(N, M))
                * self.delta() ** Fraction(1, M))

    def hypothesis_holds(self) -> bool:
        lhs = pp(4 * self.N) ** Fraction(1, 2) * self.delta() ** Fraction(1, self.N)
        return self.Q >= lhs

    def row_dot(self, i: int, f) -> Fraction:
        return sum((v * x for v, x in zip(self.vecs[i], f)), Fraction(0))

    def image_sup_terms(self, f):
        """Per-row |A_i . f| as (scale, |dot| + worst-case radius slack)."""
        out = []
        for i in range(self.M):
            dot = abs(self.row_dot(i, f))
            if self.rads is not None:
                dot += self.rads[i] * sum(abs(x) for x in f)
            out.append((self.scales[i], dot))
        return out


@dataclass
class SiegelSolution:
    f: tuple
    achieved_sup: int
    achieved_image_terms: list = field(repr=False)
    mode: str = "exact"
    sup_bound_ok: bool = True
    image_bound_ok: bool = True
    image_bound_ok_relaxed: bool = True

    def image_upper_float(self) -> float:
        return max((float(s) * float(d) for s, d in self.achieved_image_terms),
                   default=0.0)


def _scaled_leq(terms, bound: PowerProduct) -> bool:
    """max_i scale_i * dot_i <= bound, exactly."""
    for scale, dot in terms:
        if dot == 0:
            continue
        if not (scale * pp(dot)) <= bound:
            return False
    return True


def _norm_key(inst: SiegelInstance, eps_sq_num: float, f) -> float:
    """Float augmented norm for candidate ordering; exact ties resolved
    separately when everything is rational."""
    total = 0.0
    for scale, dot in inst.image_sup_terms(f):
        total += float(scale) ** 2 * float(dot) ** 2
    total += eps_sq_num * sum(x * x for x in f)
    return total


def _exact_norm_sq(inst: SiegelInstance, eps_sq: PowerProduct, f):
    """Exact Fraction norm^2 when all scales are rational, else None."""
    if not eps_sq.is_rational():
        return None
    total = Fraction(0)
    for i in range(inst.M):
        if not inst.scales[i].is_rational():
            return None
        s = inst.scales[i].as_fraction()
        total += (s * inst.row_dot(i, f)) ** 2
    total += eps_sq.as_fraction() * sum(Fraction(x * x) for x in f)
    return total


def approx_siegel(inst: SiegelInstance, mode: str = "exact") -> SiegelSolution:
    """Nonzero integer f with |f| <= Q and |Af| within the advertised bound.

    exact mode: shortest vector of the augmented lattice (both bounds hold
    verbatim).  reduced mode: LLL first vector; the bounds are guaranteed
    only up to the 2^((N-1)/2) relaxation and the solution records which
    held unrelaxed.
    """
    if not inst.hypothesis_holds():
        raise HypothesisViolated("Q below 2 sqrt(N) Delta^(1/N)")
    M, N = inst.M, inst.N
    eps = inst.epsilon()
    eps_f = float(eps)
    # generators: column j of [A; eps I]
    gen = np.zeros((N, M + N))
    for i in range(M):
        s = float(inst.scales[i])
        for j in range(N):
            gen[j, i] = s * float(inst.vecs[i][j])
    for j in range(N):
        gen[j, M + j] = eps_f

    if mode == "exact":
        if N > _EXACT_MODE_CAP:
            raise SearchExhausted(f"exact mode capped at N={_EXACT_MODE_CAP}")
        _u, cands = shortest_vector_coeffs(gen)
        if not cands:
            raise SearchExhausted("no candidates found")
        eps_sq = eps ** 2
        exact_norms = [(_exact_norm_sq(inst, eps_sq, f), f) for f in cands]
        if all(n is not None for n, _f in exact_norms):
            mn = min(n for n, _f in exact_norms)
            minima = sorted({_canonical_sign(f) for n, f in exact_norms if n == mn})
        else:
            key = min(_norm_key(inst, eps_f ** 2, f) for f in cands)
            minima = sorted({_canonical_sign(f) for f in cands
                             if _norm_key(inst, eps_f ** 2, f) <= key * (1 + 1e-12)})
        f = minima[0]
        sol = _make_solution(inst, f, "exact")
        if not (sol.sup_bound_ok and sol.image_bound_ok):
            raise SearchExhausted(
                "shortest vector failed exact bound verification")
        sol.minima = minima
        return sol

    if mode != "reduced":
        raise ValueError(f"unknown mode {mode!r}")
    B = gen.astype(float).copy()
    U = np.eye(N, dtype=np.int64)
    if lll_reduce_f64(B, U) < 0:
        # escalate: exact-arithmetic LLL on rational data when available
        return approx_siegel(inst, mode="exact")
    norms = (B * B).sum(axis=1)
    f = _canonical_sign(tuple(int(v) for v in U[int(np.argmin(norms))]))
    return _make_solution(inst, f, "reduced")


def _make_solution(inst: SiegelInstance, f, mode: str) -> SiegelSolution:
    sup = max(abs(x) for x in f)
    terms = inst.image_sup_terms(f)
    bound = inst.image_bound()
    sup_ok = inst.Q >= sup if sup > 0 else True
    image_ok = _scaled_leq(terms, bound)
    relax = pp(2) ** Fraction(inst.N - 1, 2)
    image_ok_rel = image_ok or _scaled_leq(terms, bound * relax)
    return SiegelSolution(f, sup, terms, mode, sup_ok, image_ok, image_ok_rel)
