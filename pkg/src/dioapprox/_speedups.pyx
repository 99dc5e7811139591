# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Farey walk, small-matrix LLL, roots-of-unity scans.

Mirrors `_kernels_py`; callers re-verify everything exactly, so these are
search accelerators only.
"""

import numpy as np

cimport cython
from libc.math cimport INFINITY, llround

IMPL = "compiled"


def farey_unit_count(long long T):
    cdef long long a = 0, b = 1, c = 1, d = T, k, t1, t2
    cdef long long count = 1
    while c <= T:
        k = (T + b) // d
        t1 = k * c - a
        t2 = k * d - b
        a = c
        b = d
        c = t1
        d = t2
        count += 1
    return count


def farey_unit(long long T):
    cdef long long size = farey_unit_count(T)
    nums_arr = np.empty(size, dtype=np.int64)
    dens_arr = np.empty(size, dtype=np.int64)
    cdef long long[::1] nums = nums_arr
    cdef long long[::1] dens = dens_arr
    cdef long long a = 0, b = 1, c = 1, d = T, k, t1, t2
    cdef Py_ssize_t i = 1
    nums[0] = 0
    dens[0] = 1
    while c <= T:
        nums[i] = c
        dens[i] = d
        k = (T + b) // d
        t1 = k * c - a
        t2 = k * d - b
        a = c
        b = d
        c = t1
        d = t2
        i += 1
    return nums_arr[:i], dens_arr[:i]


@cython.boundscheck(False)
def lll_reduce_f64(double[:, ::1] B, long long[:, ::1] U,
                   double delta=0.99, long max_iters=10000):
    """In-place LLL on rows of B with the transform tracked in U.

    Returns iterations, or -1 when a reduction coefficient exceeds the
    int64-safe range (caller escalates).
    """
    cdef Py_ssize_t nb = B.shape[0]
    cdef Py_ssize_t dim = B.shape[1]
    cdef Py_ssize_t nu = U.shape[1]
    O_arr = np.zeros((nb, dim), dtype=np.float64)
    mu_arr = np.zeros((nb, nb), dtype=np.float64)
    Bn_arr = np.zeros(nb, dtype=np.float64)
    cdef double[:, ::1] O = O_arr
    cdef double[:, ::1] mu = mu_arr
    cdef double[::1] Bn = Bn_arr
    cdef Py_ssize_t i, j, t, kk
    cdef double acc, m, tmp
    cdef long long q
    cdef long it = 0

    for i in range(nb):
        _gso_row(B, O, mu, Bn, i, dim)

    kk = 1
    while kk < nb:
        it += 1
        if it > max_iters:
            break
        q = _reduce_row(B, U, mu, kk, kk - 1, dim, nu)
        if q == -(2 ** 60):
            return -1
        if Bn[kk] >= (delta - mu[kk, kk - 1] * mu[kk, kk - 1]) * Bn[kk - 1]:
            for j in range(kk - 2, -1, -1):
                q = _reduce_row(B, U, mu, kk, j, dim, nu)
                if q == -(2 ** 60):
                    return -1
            kk += 1
            if kk < nb:
                _gso_row(B, O, mu, Bn, kk, dim)
        else:
            for t in range(dim):
                tmp = B[kk, t]
                B[kk, t] = B[kk - 1, t]
                B[kk - 1, t] = tmp
            for t in range(nu):
                q = U[kk, t]
                U[kk, t] = U[kk - 1, t]
                U[kk - 1, t] = q
            _gso_row(B, O, mu, Bn, kk - 1, dim)
            _gso_row(B, O, mu, Bn, kk, dim)
            if kk > 1:
                kk -= 1
    return it


cdef inline void _gso_row(double[:, ::1] B, double[:, ::1] O,
                          double[:, ::1] mu, double[::1] Bn,
                          Py_ssize_t i, Py_ssize_t dim) noexcept:
    cdef Py_ssize_t j, t
    cdef double acc
    for t in range(dim):
        O[i, t] = B[i, t]
    for j in range(i):
        acc = 0.0
        for t in range(dim):
            acc += B[i, t] * O[j, t]
        if Bn[j] > 0.0:
            mu[i, j] = acc / Bn[j]
        else:
            mu[i, j] = 0.0
        for t in range(dim):
            O[i, t] -= mu[i, j] * O[j, t]
    acc = 0.0
    for t in range(dim):
        acc += O[i, t] * O[i, t]
    Bn[i] = acc


cdef inline long long _reduce_row(double[:, ::1] B, long long[:, ::1] U,
                                  double[:, ::1] mu, Py_ssize_t kk,
                                  Py_ssize_t j, Py_ssize_t dim,
                                  Py_ssize_t nu) noexcept:
    cdef long long q = llround(mu[kk, j])
    cdef Py_ssize_t t
    if q != 0:
        if q > 2 ** 40 or q < -(2 ** 40):
            return -(2 ** 60)
        for t in range(dim):
            B[kk, t] -= q * B[j, t]
        for t in range(nu):
            U[kk, t] -= q * U[j, t]
        for t in range(j):
            mu[kk, t] -= q * mu[j, t]
        mu[kk, j] -= q
    return q


# ---------------------------------------------------------------------------
# roots-of-unity scans (n <= 3 specialized loops, sorted within groups)
# ---------------------------------------------------------------------------

def roots_min_scan(cre, cim, long N, groups, double zero_tol=1e-9,
                   int do_prune=1):
    cdef int n = 0
    for g in groups:
        n += g
    cos_arr = np.cos(2.0 * np.pi * np.arange(N) / N)
    sin_arr = np.sin(2.0 * np.pi * np.arange(N) / N)
    cdef double[::1] wre = cos_arr
    cdef double[::1] wim = sin_arr
    re_arr = np.asarray([float(v) for v in cre], dtype=np.float64)
    im_arr = np.asarray([float(v) for v in cim], dtype=np.float64)
    cdef double[::1] ar = re_arr
    cdef double[::1] ai = im_arr
    # group-start table: start2[k1] etc. encoded by whether consecutive
    # positions share a group
    same = _same_group_flags(groups, n)
    cdef long same1 = same[0] if n >= 2 else 0
    cdef long same2 = same[1] if n >= 3 else 0
    cdef long k1, k2, k3, s2, s3
    cdef double re0 = ar[0], im0 = ai[0]
    cdef double re1, im1, re2, im2, re3, im3, s, hyp, gap
    cdef double best = INFINITY
    cdef long long zero_count = 0
    cdef long b1 = -1, b2 = -1, b3 = -1
    # triangle-inequality prune: a partial sum further from 0 than the
    # remaining coefficient mass can never undercut the current best
    cdef double rest1 = 0.0, rest2 = 0.0
    cdef int j
    for j in range(2, n + 1):
        rest1 += (ar[j] * ar[j] + ai[j] * ai[j]) ** 0.5
    if n >= 3:
        rest2 = (ar[3] * ar[3] + ai[3] * ai[3]) ** 0.5

    if n == 1:
        for k1 in range(N):
            re1 = re0 + ar[1] * wre[k1] - ai[1] * wim[k1]
            im1 = im0 + ar[1] * wim[k1] + ai[1] * wre[k1]
            s = re1 * re1 + im1 * im1
            if s <= zero_tol:
                zero_count += 1
            elif s < best:
                best = s
                b1 = k1
        return best, ((b1,) if b1 >= 0 else None), zero_count
    if n == 2:
        for k1 in range(N):
            re1 = re0 + ar[1] * wre[k1] - ai[1] * wim[k1]
            im1 = im0 + ar[1] * wim[k1] + ai[1] * wre[k1]
            if do_prune and best < INFINITY:
                hyp = (re1 * re1 + im1 * im1) ** 0.5
                gap = hyp - rest1
                if gap > 0 and gap * gap > best:
                    continue
            s2 = k1 if same1 else 0
            for k2 in range(s2, N):
                re2 = re1 + ar[2] * wre[k2] - ai[2] * wim[k2]
                im2 = im1 + ar[2] * wim[k2] + ai[2] * wre[k2]
                s = re2 * re2 + im2 * im2
                if s <= zero_tol:
                    zero_count += 1
                elif s < best:
                    best = s
                    b1 = k1
                    b2 = k2
        return best, ((b1, b2) if b1 >= 0 else None), zero_count
    if n == 3:
        for k1 in range(N):
            re1 = re0 + ar[1] * wre[k1] - ai[1] * wim[k1]
            im1 = im0 + ar[1] * wim[k1] + ai[1] * wre[k1]
            if do_prune and best < INFINITY:
                hyp = (re1 * re1 + im1 * im1) ** 0.5
                gap = hyp - rest1
                if gap > 0 and gap * gap > best:
                    continue
            s2 = k1 if same1 else 0
            for k2 in range(s2, N):
                re2 = re1 + ar[2] * wre[k2] - ai[2] * wim[k2]
                im2 = im1 + ar[2] * wim[k2] + ai[2] * wre[k2]
                if do_prune and best < INFINITY:
                    hyp = (re2 * re2 + im2 * im2) ** 0.5
                    gap = hyp - rest2
                    if gap > 0 and gap * gap > best:
                        continue
                s3 = k2 if same2 else 0
                for k3 in range(s3, N):
                    re3 = re2 + ar[3] * wre[k3] - ai[3] * wim[k3]
                    im3 = im2 + ar[3] * wim[k3] + ai[3] * wre[k3]
                    s = re3 * re3 + im3 * im3
                    if s <= zero_tol:
                        zero_count += 1
                    elif s < best:
                        best = s
                        b1 = k1
                        b2 = k2
                        b3 = k3
        return best, ((b1, b2, b3) if b1 >= 0 else None), zero_count
    raise ValueError("compiled scan supports n <= 3")


def roots_collect_near(cre, cim, long N, groups, double threshold_sq,
                       double zero_tol=1e-9, long cap=200000):
    cdef int n = 0
    for g in groups:
        n += g
    cos_arr = np.cos(2.0 * np.pi * np.arange(N) / N)
    sin_arr = np.sin(2.0 * np.pi * np.arange(N) / N)
    cdef double[::1] wre = cos_arr
    cdef double[::1] wim = sin_arr
    re_arr = np.asarray([float(v) for v in cre], dtype=np.float64)
    im_arr = np.asarray([float(v) for v in cim], dtype=np.float64)
    cdef double[::1] ar = re_arr
    cdef double[::1] ai = im_arr
    same = _same_group_flags(groups, n)
    cdef long same1 = same[0] if n >= 2 else 0
    cdef long same2 = same[1] if n >= 3 else 0
    cdef double lim = threshold_sq if threshold_sq > zero_tol else zero_tol
    cdef long k1, k2, k3, s2, s3
    cdef double re0 = ar[0], im0 = ai[0]
    cdef double re1, im1, re2, im2, re3, im3, s
    out = []

    if n == 1:
        for k1 in range(N):
            re1 = re0 + ar[1] * wre[k1] - ai[1] * wim[k1]
            im1 = im0 + ar[1] * wim[k1] + ai[1] * wre[k1]
            s = re1 * re1 + im1 * im1
            if s <= lim:
                out.append(((k1,), s))
                if len(out) >= cap:
                    return out
        return out
    if n == 2:
        for k1 in range(N):
            re1 = re0 + ar[1] * wre[k1] - ai[1] * wim[k1]
            im1 = im0 + ar[1] * wim[k1] + ai[1] * wre[k1]
            s2 = k1 if same1 else 0
            for k2 in range(s2, N):
                re2 = re1 + ar[2] * wre[k2] - ai[2] * wim[k2]
                im2 = im1 + ar[2] * wim[k2] + ai[2] * wre[k2]
                s = re2 * re2 + im2 * im2
                if s <= lim:
                    out.append(((k1, k2), s))
                    if len(out) >= cap:
                        return out
        return out
    if n == 3:
        for k1 in range(N):
            re1 = re0 + ar[1] * wre[k1] - ai[1] * wim[k1]
            im1 = im0 + ar[1] * wim[k1] + ai[1] * wre[k1]
            s2 = k1 if same1 else 0
            for k2 in range(s2, N):
                re2 = re1 + ar[2] * wre[k2] - ai[2] * wim[k2]
                im2 = im1 + ar[2] * wim[k2] + ai[2] * wre[k2]
                s3 = k2 if same2 else 0
                for k3 in range(s3, N):
                    re3 = re2 + ar[3] * wre[k3] - ai[3] * wim[k3]
                    im3 = im2 + ar[3] * wim[k3] + ai[3] * wre[k3]
                    s = re3 * re3 + im3 * im3
                    if s <= lim:
                        out.append(((k1, k2, k3), s))
                        if len(out) >= cap:
                            return out
        return out
    raise ValueError("compiled scan supports n <= 3")


def _same_group_flags(groups, int n):
    """same[j] is 1 when position j+1 shares a coefficient group with j."""
    gid = []
    for gi, g in enumerate(groups):
        gid += [gi] * g
    return [1 if gid[j] == gid[j + 1] else 0 for j in range(n - 1)]


# ---------------------------------------------------------------------------
# batched cube scan: scale rows, augment, warm-started LLL per cube
# ---------------------------------------------------------------------------

def aux_scan_batch(double[:, :, ::1] raw, double[::1] weights, double eps,
                   long long[:, ::1] fs, long chunk, double delta=0.99):
    """For each cube c: rows raw[c] scaled to norms weights[:], augmented by
    eps*I, LLL-reduced warm-starting from the previous cube's transform,
    with the min-norm row's integer coefficients written to fs[c].

    Cubes with a zero raw row leave fs[c] = 0 (caller repairs exactly).
    """
    cdef Py_ssize_t ncubes = raw.shape[0]
    cdef Py_ssize_t M = raw.shape[1]
    cdef Py_ssize_t N = raw.shape[2]
    cdef Py_ssize_t dim = M + N
    src_arr = np.zeros((N, dim), dtype=np.float64)
    basis_arr = np.zeros((N, dim), dtype=np.float64)
    u_arr = np.zeros((N, N), dtype=np.int64)
    uw_arr = np.zeros((N, N), dtype=np.int64)
    cdef double[:, ::1] src = src_arr
    cdef double[:, ::1] basis = basis_arr
    cdef long long[:, ::1] U = u_arr
    cdef long long[:, ::1] Uw = uw_arr
    cdef Py_ssize_t c, i, j, t, ibest
    cdef double norm, acc, best
    cdef int warm = 0
    cdef int code
    for c in range(ncubes):
        # scaled rows -> src columns 0..M-1; eps block in columns M..
        code = 1
        for i in range(M):
            acc = 0.0
            for j in range(N):
                acc += raw[c, i, j] * raw[c, i, j]
            if acc <= 0.0:
                code = 0
                break
            norm = weights[i] / acc ** 0.5
            for j in range(N):
                src[j, i] = raw[c, i, j] * norm
        if code == 0:
            warm = 0
            continue
        for j in range(N):
            for t in range(N):
                src[j, M + t] = eps if t == j else 0.0
        if warm == 0 or c % chunk == 0:
            for i in range(N):
                for j in range(N):
                    U[i, j] = 1 if i == j else 0
                for t in range(dim):
                    basis[i, t] = src[i, t]
        else:
            for i in range(N):
                for j in range(N):
                    U[i, j] = Uw[i, j]
                for t in range(dim):
                    acc = 0.0
                    for j in range(N):
                        acc += Uw[i, j] * src[j, t]
                    basis[i, t] = acc
        if lll_reduce_f64(basis_arr, u_arr, delta) < 0:
            for i in range(N):
                for j in range(N):
                    U[i, j] = 1 if i == j else 0
                for t in range(dim):
                    basis[i, t] = src[i, t]
            lll_reduce_f64(basis_arr, u_arr, delta)
        best = INFINITY
        ibest = 0
        for i in range(N):
            acc = 0.0
            for t in range(dim):
                acc += basis[i, t] * basis[i, t]
            if acc < best:
                best = acc
                ibest = i
        for j in range(N):
            fs[c, j] = U[ibest, j]
            for t in range(N):
                Uw[j, t] = U[j, t]
        warm = 1
    return 0
