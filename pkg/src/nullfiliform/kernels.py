"""Integer kernels over F_p used by the brute-force oracle and dimension counts.

Every kernel has a numba implementation and a pure-numpy one.  The numba
versions are used unless numba is missing or ``NULLFILIFORM_DISABLE_NUMBA=1``
is set in the environment.  Both are importable directly (``*_numba`` /
``*_numpy``) so they can be benchmarked and cross-checked.
"""
from __future__ import annotations

import functools
import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba as nb

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    nb = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("NULLFILIFORM_DISABLE_NUMBA", "") not in ("1", "true", "yes")

if HAVE_NUMBA:
    njit = functools.partial(nb.njit, cache=True, nogil=True)
    pjit = functools.partial(nb.njit, cache=True, nogil=True, parallel=True)
    # old TBB builds only produce a warning; go straight to the other layers
    nb.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    prange = nb.prange
else:  # pragma: no cover
    def njit(fn=None, **_):
        return fn if fn is not None else (lambda f: f)

    pjit = njit
    prange = range


def set_threads(k: int | None) -> int:
    """Cap the worker threads used by the parallel kernels; returns the count in effect.

    Each parallel kernel writes to disjoint output slots, so results do not
    depend on the thread count.
    """
    if not HAVE_NUMBA:
        return 1
    if k is not None:
        nb.set_num_threads(max(1, min(int(k), nb.config.NUMBA_NUM_THREADS)))
    return nb.get_num_threads()


# ---------------------------------------------------------------------------
# row reduction


@njit
def _rref_numba(M, p):
    R = M.copy() % p
    rows, cols = R.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if R[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = R[r, j]
                R[r, j] = R[piv, j]
                R[piv, j] = tmp
        # inverse by Fermat
        inv = 1
        base = R[r, c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for j in range(cols):
            R[r, j] = R[r, j] * inv % p
        for i in range(rows):
            if i != r and R[i, c] != 0:
                f = R[i, c]
                for j in range(cols):
                    R[i, j] = (R[i, j] - f * R[r, j]) % p
        pivots[r] = c
        r += 1
    return R[:r], pivots[:r]


def _rref_numpy(M, p):
    R = np.asarray(M, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        f = R[:, c].copy()
        f[r] = 0
        R = (R - np.outer(f, R[r])) % p
        pivots.append(c)
        r += 1
    return R[:r], np.array(pivots, dtype=np.int64)


def rref_mod_p_numba(M, p):
    return _rref_numba(np.ascontiguousarray(M, dtype=np.int64), np.int64(p))


rref_mod_p_numpy = _rref_numpy


def rref_mod_p(M, p):
    """Reduced row echelon form mod p: (nonzero rows, pivot columns)."""
    return (rref_mod_p_numba if USE_NUMBA else rref_mod_p_numpy)(M, p)


def rank_mod_p(M, p) -> int:
    return int(rref_mod_p(M, p)[1].shape[0])


# ---------------------------------------------------------------------------
# automorphism matrices


def decode_candidates(idx, n, p):
    """Map candidate numbers to parameter vectors (A_1 in 1..p-1, the rest in 0..p-1).

    Candidates are numbered in lexicographic order of (A_1, ..., A_n), so 0 is
    the identity.
    """
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty(idx.shape + (n,), dtype=np.int64)
    rest = idx.copy()
    for k in range(n - 1, 0, -1):
        out[..., k] = rest % p
        rest //= p
    out[..., 0] = rest + 1
    return out


@njit
def _auto_matrix_into(A, p, M):
    n = A.shape[0]
    # column i holds coefficients of a(t)^(i+1), degrees 1..n
    for t in range(n):
        M[t, 0] = A[t] % p
    for i in range(1, n):
        for m in range(n):
            acc = 0
            # a^(i+1)[deg m+1] = sum_k A[k] * a^i[deg m+1-(k+1)]
            for k in range(m):
                if A[k] != 0:
                    acc += A[k] * M[m - k - 1, i - 1]
            M[m, i] = acc % p


@njit
def _auto_matrices_numba(As, p):
    N, n = As.shape
    out = np.zeros((N, n, n), dtype=np.int64)
    for c in range(N):
        _auto_matrix_into(As[c], p, out[c])
    return out


def _auto_matrices_numpy(As, p):
    As = np.asarray(As, dtype=np.int64) % p
    N, n = As.shape
    out = np.zeros((N, n, n), dtype=np.int64)
    out[:, :, 0] = As
    for i in range(1, n):
        for m in range(n):
            acc = np.zeros(N, dtype=np.int64)
            for k in range(m):
                acc += As[:, k] * out[:, m - k - 1, i - 1]
            out[:, m, i] = acc % p
    return out


def auto_matrices(As, p):
    As = np.ascontiguousarray(As, dtype=np.int64)
    return _auto_matrices_numba(As, np.int64(p)) if USE_NUMBA else _auto_matrices_numpy(As, p)


@njit
def _lower_inverse_numba(Ms, p):
    N, n, _ = Ms.shape
    out = np.zeros_like(Ms)
    for c in range(N):
        M = Ms[c]
        inv_d = np.empty(n, dtype=np.int64)
        for i in range(n):
            base = M[i, i] % p
            r = 1
            e = p - 2
            while e > 0:
                if e & 1:
                    r = r * base % p
                base = base * base % p
                e >>= 1
            inv_d[i] = r
        for j in range(n):
            out[c, j, j] = inv_d[j]
            for i in range(j + 1, n):
                acc = 0
                for k in range(j, i):
                    acc += M[i, k] * out[c, k, j]
                out[c, i, j] = (-acc % p) * inv_d[i] % p
    return out


def _lower_inverse_numpy(Ms, p):
    Ms = np.asarray(Ms, dtype=np.int64)
    N, n, _ = Ms.shape
    out = np.zeros_like(Ms)
    inv_d = np.stack([np.array([pow(int(x), -1, p) for x in Ms[:, i, i]], dtype=np.int64) for i in range(n)], axis=1) \
        if N else np.zeros((0, n), dtype=np.int64)
    for j in range(n):
        out[:, j, j] = inv_d[:, j]
        for i in range(j + 1, n):
            acc = np.zeros(N, dtype=np.int64)
            for k in range(j, i):
                acc += Ms[:, i, k] * out[:, k, j]
            out[:, i, j] = (-acc % p) * inv_d[:, i] % p
    return out


def lower_inverses(Ms, p):
    Ms = np.ascontiguousarray(Ms, dtype=np.int64)
    return _lower_inverse_numba(Ms, np.int64(p)) if USE_NUMBA else _lower_inverse_numpy(Ms, p)


# ---------------------------------------------------------------------------
# transport and isomorphism search


@njit
def _transport_one(S, M, Mi, p, out, v):
    n = M.shape[0]
    for i in range(n):
        for j in range(n):
            for m in range(n):
                v[m] = 0
            for k in range(n):
                if M[k, i] == 0:
                    continue
                for l in range(n):
                    w = M[k, i] * M[l, j] % p
                    if w == 0:
                        continue
                    for m in range(n):
                        v[m] += w * S[k, l, m]
            for m in range(n):
                v[m] %= p
            for r in range(n):
                acc = 0
                for m in range(n):
                    acc += Mi[r, m] * v[m]
                out[i, j, r] = acc % p


@pjit
def _transport_batch_numba(S, Ms, Minvs, p):
    N, n, _ = Ms.shape
    out = np.zeros((N, n, n, n), dtype=np.int64)
    for c in prange(N):
        _transport_one(S, Ms[c], Minvs[c], p, out[c], np.zeros(n, dtype=np.int64))
    return out


def _transport_batch_numpy(S, Ms, Minvs, p):
    v = np.einsum("cki,clj,klm->cijm", Ms, Ms, S, optimize=True) % p
    return np.einsum("crm,cijm->cijr", Minvs, v, optimize=True) % p


def transport_batch(S, Ms, Minvs, p):
    """transport(S, phi_c) for every matrix in the batch, as an (N, n, n, n) array."""
    S = np.ascontiguousarray(S, dtype=np.int64)
    Ms = np.ascontiguousarray(Ms, dtype=np.int64)
    Minvs = np.ascontiguousarray(Minvs, dtype=np.int64)
    if USE_NUMBA:
        return _transport_batch_numba(S, Ms, Minvs, np.int64(p))
    return _transport_batch_numpy(S, Ms, Minvs, p)


@njit
def _iso_candidate(a, b, p, idx, A, M, lhs):
    """True when candidate number idx maps a onto b."""
    n = a.shape[0]
    rest = idx
    for k in range(n - 1, 0, -1):
        A[k] = rest % p
        rest //= p
    A[0] = rest + 1
    _auto_matrix_into(A, p, M)
    for i in range(n):
        for j in range(n):
            # b(phi e_i, phi e_j) == phi(a(e_i, e_j))
            for m in range(n):
                lhs[m] = 0
            for k in range(n):
                if M[k, i] == 0:
                    continue
                for l in range(n):
                    w = M[k, i] * M[l, j] % p
                    if w == 0:
                        continue
                    for m in range(n):
                        lhs[m] += w * b[k, l, m]
            for r in range(n):
                acc = 0
                for m in range(n):
                    acc += M[r, m] * a[i, j, m]
                if (lhs[r] - acc) % p != 0:
                    return False
    return True


@pjit
def _find_iso_numba(a, b, p, block):
    n = a.shape[0]
    total = (p - 1) * p ** (n - 1)
    lanes = 64
    hits = np.empty(lanes, dtype=np.int64)
    for start in range(0, total, block):
        stop = min(total, start + block)
        step = (stop - start + lanes - 1) // lanes
        # each lane scans its own slice and keeps its first hit; the least wins
        for t in prange(lanes):
            A = np.zeros(n, dtype=np.int64)
            M = np.zeros((n, n), dtype=np.int64)
            lhs = np.zeros(n, dtype=np.int64)
            hits[t] = -1
            for idx in range(start + t * step, min(stop, start + (t + 1) * step)):
                if _iso_candidate(a, b, p, idx, A, M, lhs):
                    hits[t] = idx
                    break
        for t in range(lanes):
            if hits[t] >= 0:
                return hits[t]
    return -1


def _find_iso_numpy(a, b, p, chunk=1 << 14):
    n = a.shape[0]
    total = (p - 1) * p ** (n - 1)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        Ms = _auto_matrices_numpy(decode_candidates(idx, n, p), p)
        alive = np.arange(idx.size)
        # filter one basis pair at a time so most candidates drop out early
        for i in range(n):
            for j in range(n):
                if alive.size == 0:
                    break
                M = Ms[alive]
                lhs = np.einsum("ck,cl,klm->cm", M[:, :, i], M[:, :, j], b) % p
                rhs = np.einsum("crm,m->cr", M, a[i, j]) % p
                alive = alive[np.all(lhs == rhs, axis=1)]
        if alive.size:
            return int(idx[alive[0]])
    return -1


def find_isomorphism_numba(a, b, p, block=1 << 14):
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    return int(_find_iso_numba(a, b, np.int64(p), np.int64(block)))


def find_isomorphism_numpy(a, b, p):
    return _find_iso_numpy(np.asarray(a, dtype=np.int64) % p, np.asarray(b, dtype=np.int64) % p, p)


def find_isomorphism(a, b, p) -> int:
    """Least candidate number c with b(phi_c x, phi_c y) = phi_c(a(x, y)), or -1."""
    return (find_isomorphism_numba if USE_NUMBA else find_isomorphism_numpy)(a, b, p)


# ---------------------------------------------------------------------------
# batch identity tests


@pjit
def _identity_masks_numba(stars, D, p):
    N, n = stars.shape[0], stars.shape[1]
    assoc = np.ones(N, dtype=np.bool_)
    idm = np.ones(N, dtype=np.bool_)
    twm = np.ones(N, dtype=np.bool_)
    for c in prange(N):
        S = stars[c]
        t1 = np.zeros(n, dtype=np.int64)
        t2 = np.zeros(n, dtype=np.int64)
        t3 = np.zeros(n, dtype=np.int64)
        t4 = np.zeros(n, dtype=np.int64)
        s1 = np.zeros(n, dtype=np.int64)
        s2 = np.zeros(n, dtype=np.int64)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        t1[l] = 0
                        t2[l] = 0
                        t3[l] = 0
                        t4[l] = 0
                        s1[l] = 0
                        s2[l] = 0
                    for m in range(n):
                        dij = D[i, j, m]
                        sij = S[i, j, m]
                        sjk = S[j, k, m]
                        djk = D[j, k, m]
                        for l in range(n):
                            t1[l] += dij * S[m, k, l]   # (a.b)*c
                            t2[l] += sij * D[m, k, l]   # (a*b).c
                            t3[l] += sjk * D[i, m, l]   # a.(b*c)
                            t4[l] += djk * S[i, m, l]   # a*(b.c)
                            s1[l] += sij * S[m, k, l]   # (a*b)*c
                            s2[l] += sjk * S[i, m, l]   # a*(b*c)
                    for l in range(n):
                        if (t1[l] - t3[l]) % p != 0 or (t2[l] - t4[l]) % p != 0:
                            idm[c] = False
                        if (t1[l] - t4[l]) % p != 0 or (t2[l] - t3[l]) % p != 0:
                            twm[c] = False
                        if (s1[l] - s2[l]) % p != 0:
                            assoc[c] = False
    return assoc, idm, twm


def _identity_masks_numpy(stars, D, p):
    S = np.asarray(stars, dtype=np.int64)
    t1 = np.einsum("ijm,cmkl->cijkl", D, S)
    t2 = np.einsum("cijm,mkl->cijkl", S, D)
    t3 = np.einsum("cjkm,iml->cijkl", S, D)
    t4 = np.einsum("jkm,ciml->cijkl", D, S)
    s1 = np.einsum("cijm,cmkl->cijkl", S, S)
    s2 = np.einsum("cjkm,ciml->cijkl", S, S)
    ok = lambda x, y: np.all(((x - y) % p == 0).reshape(S.shape[0], -1), axis=1)
    return ok(s1, s2), ok(t1, t3) & ok(t2, t4), ok(t1, t4) & ok(t2, t3)


def identity_masks(stars, D, p):
    """(associative, id-matching, (12)-matching) flags for each star in a batch."""
    stars = np.ascontiguousarray(stars, dtype=np.int64)
    D = np.ascontiguousarray(D, dtype=np.int64)
    if USE_NUMBA:
        return _identity_masks_numba(stars, D, np.int64(p))
    return _identity_masks_numpy(stars, D, p)


def null_filiform_int(n: int) -> np.ndarray:
    D = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n - i - 1):
            D[i, j, i + j + 1] = 1
    return D
