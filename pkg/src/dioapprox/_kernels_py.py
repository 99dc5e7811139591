"""Pure-Python fallbacks for the hot kernels.

Same calling conventions as the compiled `_speedups` module; all outputs
are re-verified or certified exactly by callers, so these only need to be
correct searches, not bit-identical to the compiled versions.
"""

from __future__ import annotations

import math
from itertools import combinations_with_replacement, product

import numpy as np

IMPL = "python"


# ---------------------------------------------------------------------------
# Farey walk on [0, 1]
# ---------------------------------------------------------------------------

def farey_unit_count(T: int) -> int:
    """|{a/b in [0,1] lowest terms, b <= T}| via the Farey neighbor walk."""
    a, b, c, d = 0, 1, 1, T
    count = 1
    while c <= T:
        k = (T + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        count += 1
    return count


def farey_unit(T: int):
    """All fractions of F_T on [0,1], ascending, as (num, den) arrays."""
    size = farey_unit_count(T)
    nums = np.empty(size, dtype=np.int64)
    dens = np.empty(size, dtype=np.int64)
    a, b, c, d = 0, 1, 1, T
    nums[0], dens[0] = 0, 1
    i = 1
    while c <= T:
        nums[i], dens[i] = c, d
        k = (T + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        i += 1
    return nums[:i], dens[:i]


# ---------------------------------------------------------------------------
# LLL on float64 rows with an integer transform
# ---------------------------------------------------------------------------

def lll_reduce_f64(B: np.ndarray, U: np.ndarray, delta: float = 0.99,
                   max_iters: int = 10000) -> int:
    """In-place LLL on the rows of B; U gets the same row operations.

    Returns the iteration count, or -1 if a size-reduction step exceeded
    the int64-safe range (caller escalates to exact arithmetic).
    """
    nb = B.shape[0]
    O = np.zeros_like(B)
    mu = np.zeros((nb, nb))
    Bn = np.zeros(nb)

    def gso_row(i):
        O[i] = B[i]
        for j in range(i):
            mu[i, j] = 0.0 if Bn[j] <= 0.0 else float(B[i] @ O[j]) / Bn[j]
            O[i] -= mu[i, j] * O[j]
        Bn[i] = float(O[i] @ O[i])

    for i in range(nb):
        gso_row(i)

    def reduce_row(kk, j):
        q = round(mu[kk, j])
        if q != 0:
            if abs(q) > 2 ** 40:
                return None
            B[kk] -= q * B[j]
            U[kk] -= q * U[j]
            mu[kk, :j] -= q * mu[j, :j]
            mu[kk, j] -= q
        return q

    kk = 1
    it = 0
    while kk < nb:
        it += 1
        if it > max_iters:
            break
        if reduce_row(kk, kk - 1) is None:
            return -1
        if Bn[kk] >= (delta - mu[kk, kk - 1] ** 2) * Bn[kk - 1]:
            for j in range(kk - 2, -1, -1):
                if reduce_row(kk, j) is None:
                    return -1
            kk += 1
            if kk < nb:
                gso_row(kk)
        else:
            B[[kk, kk - 1]] = B[[kk - 1, kk]]
            U[[kk, kk - 1]] = U[[kk - 1, kk]]
            gso_row(kk - 1)
            gso_row(kk)
            kk = max(kk - 1, 1)
    return it


def aux_scan_batch(raw: np.ndarray, weights: np.ndarray, eps: float,
                   fs: np.ndarray, chunk: int, delta: float = 0.99) -> int:
    """Batched cube scan (see the compiled twin for the contract)."""
    ncubes, M, N = raw.shape
    eps_block = np.eye(N) * eps
    src = np.zeros((N, M + N))
    u_warm = None
    for c in range(ncubes):
        A = raw[c]
        norms = np.sqrt((A * A).sum(axis=1))
        if not norms.all():
            u_warm = None
            continue
        src[:, :M] = (A * (weights / norms)[:, None]).T
        src[:, M:] = eps_block
        if u_warm is None or c % chunk == 0:
            U = np.eye(N, dtype=np.int64)
            basis = src.copy()
        else:
            U = u_warm.copy()
            basis = U.astype(np.float64) @ src
        if lll_reduce_f64(basis, U, delta) < 0:
            U = np.eye(N, dtype=np.int64)
            basis = src.copy()
            lll_reduce_f64(basis, U, delta)
        bn = (basis * basis).sum(axis=1)
        fs[c] = U[int(np.argmin(bn))]
        u_warm = U
    return 0


# ---------------------------------------------------------------------------
# roots-of-unity minimum scans (vectorized over the last exponent)
# ---------------------------------------------------------------------------

def _tuple_starts(groups, prefix):
    """Smallest admissible next index given the sorted-group structure."""
    pos = len(prefix)
    acc = 0
    for g in groups:
        if pos < acc + g:
            return prefix[-1] if pos > acc else 0
        acc += g
    raise IndexError


def _lead_tuples(groups, N, n):
    """All admissible (k_1..k_{n-1}) prefixes, sorted within groups."""
    if n == 1:
        yield ()
        return

    def rec(prefix):
        if len(prefix) == n - 1:
            yield tuple(prefix)
            return
        start = _tuple_starts(groups, prefix)
        for k in range(start, N):
            yield from rec(prefix + [k])

    yield from rec([])


def roots_min_scan(cre, cim, N: int, groups, zero_tol: float = 1e-9,
                   do_prune: int = 0):
    """Smallest nonzero-looking |a_0 + sum a_j zeta^(k_j)|^2.

    ``groups`` lists run lengths of equal coefficients among a_1..a_n;
    tuples are non-decreasing within each run.  Returns
    (best_sq, argmin tuple, float_zero_count); sums with |s|^2 <= zero_tol
    are counted as zero candidates and excluded from the minimum.
    """
    n = sum(groups)
    ang = 2.0 * np.pi * np.arange(N) / N
    wre, wim = np.cos(ang), np.sin(ang)
    cre = [float(v) for v in cre]
    cim = [float(v) for v in cim]
    best = math.inf
    best_tuple = None
    zero_count = 0
    for prefix in _lead_tuples(groups, N, n):
        re = cre[0]
        im = cim[0]
        for j, k in enumerate(prefix):
            re += cre[j + 1] * wre[k] - cim[j + 1] * wim[k]
            im += cre[j + 1] * wim[k] + cim[j + 1] * wre[k]
        start = _tuple_starts(groups, list(prefix)) if n > 1 else 0
        a_re, a_im = cre[n], cim[n]
        sre = re + a_re * wre[start:] - a_im * wim[start:]
        sim = im + a_re * wim[start:] + a_im * wre[start:]
        ssq = sre * sre + sim * sim
        zmask = ssq <= zero_tol
        zero_count += int(zmask.sum())
        ssq[zmask] = math.inf
        i = int(np.argmin(ssq))
        v = float(ssq[i])
        cand = prefix + (start + i,)
        if v < best or (v == best and best_tuple is not None and cand < best_tuple):
            best = v
            best_tuple = cand
    return best, best_tuple, zero_count


def roots_collect_near(cre, cim, N: int, groups, threshold_sq: float,
                       zero_tol: float = 1e-9, cap: int = 200000):
    """All tuples with |sum|^2 <= max(threshold_sq, zero_tol), with values."""
    n = sum(groups)
    ang = 2.0 * np.pi * np.arange(N) / N
    wre, wim = np.cos(ang), np.sin(ang)
    cre = [float(v) for v in cre]
    cim = [float(v) for v in cim]
    lim = max(threshold_sq, zero_tol)
    out = []
    for prefix in _lead_tuples(groups, N, n):
        re = cre[0]
        im = cim[0]
        for j, k in enumerate(prefix):
            re += cre[j + 1] * wre[k] - cim[j + 1] * wim[k]
            im += cre[j + 1] * wim[k] + cim[j + 1] * wre[k]
        start = _tuple_starts(groups, list(prefix)) if n > 1 else 0
        a_re, a_im = cre[n], cim[n]
        sre = re + a_re * wre[start:] - a_im * wim[start:]
        sim = im + a_re * wim[start:] + a_im * wre[start:]
        ssq = sre * sre + sim * sim
        for i in np.nonzero(ssq <= lim)[0]:
            out.append((prefix + (start + int(i),), float(ssq[i])))
            if len(out) >= cap:
                return out
    return out
