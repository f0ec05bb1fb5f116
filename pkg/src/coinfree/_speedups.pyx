# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the hot kernels.

Must agree with `_fallback` exactly: same outputs, same enumeration
order.  Word search runs entirely in C ints; grid evaluation keeps
Python ints for the rational arithmetic (denominators are unbounded) and
compiles away the loop machinery.
"""
from math import gcd

from . import _fallback

DEF WORD_CAP = 120
DEF CONJ_CAP = 30
DEF PAIR_CAP = 16
DEF WORK_CAP = 512


def free_reduce_ints(word):
    cdef int buf[4096]
    cdef int top = 0
    cdef int s
    if len(word) > 4096:
        return _fallback.free_reduce_ints(word)
    for s in word:
        if top > 0 and buf[top - 1] == -s:
            top -= 1
        else:
            buf[top] = s
            top += 1
    return [buf[i] for i in range(top)]


cdef bint _conj_matches(int *c, int clen, int *u, int ulen,
                        int *v, int vlen, int *work) noexcept:
    cdef int top = 0
    cdef int i, s
    for i in range(clen):
        s = c[i]
        if top > 0 and work[top - 1] == -s:
            top -= 1
        else:
            work[top] = s
            top += 1
    for i in range(ulen):
        s = u[i]
        if top > 0 and work[top - 1] == -s:
            top -= 1
        else:
            work[top] = s
            top += 1
    for i in range(clen - 1, -1, -1):
        s = -c[i]
        if top > 0 and work[top - 1] == -s:
            top -= 1
        else:
            work[top] = s
            top += 1
    if top != vlen:
        return False
    for i in range(top):
        if work[i] != v[i]:
            return False
    return True


def brute_conjugator(us, vs, rank, max_len):
    """Same contract and enumeration order as _fallback.brute_conjugator."""
    cdef int npairs = len(us)
    cdef int u_store[PAIR_CAP][WORD_CAP]
    cdef int v_store[PAIR_CAP][WORD_CAP]
    cdef int u_len[PAIR_CAP]
    cdef int v_len[PAIR_CAP]
    cdef int letters[64]
    cdef int c[CONJ_CAP]
    cdef int pos[CONJ_CAP]
    cdef int work[WORK_CAP]
    cdef int i, j, s, nletters, L, depth, letter
    cdef bint ok

    if (rank > 26 or max_len > CONJ_CAP or npairs > PAIR_CAP
            or len(vs) != npairs
            or any(len(w) > WORD_CAP for w in us)
            or any(len(w) > WORD_CAP for w in vs)):
        return _fallback.brute_conjugator(us, vs, rank, max_len)

    for i in range(npairs):
        u_len[i] = len(us[i])
        for j in range(u_len[i]):
            u_store[i][j] = us[i][j]
        v_len[i] = len(vs[i])
        for j in range(v_len[i]):
            v_store[i][j] = vs[i][j]
    nletters = 2 * rank
    for i in range(rank):
        letters[2 * i] = i + 1
        letters[2 * i + 1] = -(i + 1)

    ok = True
    for i in range(npairs):
        if not _conj_matches(c, 0, u_store[i], u_len[i],
                             v_store[i], v_len[i], work):
            ok = False
            break
    if ok:
        return []

    for L in range(1, max_len + 1):
        depth = 0
        pos[0] = -1
        while depth >= 0:
            pos[depth] += 1
            if pos[depth] >= nletters:
                depth -= 1
                continue
            letter = letters[pos[depth]]
            if depth > 0 and c[depth - 1] == -letter:
                continue
            c[depth] = letter
            if depth + 1 == L:
                ok = True
                for i in range(npairs):
                    if not _conj_matches(c, L, u_store[i], u_len[i],
                                         v_store[i], v_len[i], work):
                        ok = False
                        break
                if ok:
                    return [c[i] for i in range(L)]
            else:
                depth += 1
                pos[depth] = -1
    return None


def eval_track_grid(segs, resolution, edge_ends):
    """Same contract as _fallback.eval_track_grid."""
    cdef Py_ssize_t n = resolution
    cdef Py_ssize_t k, i, last
    out = []
    i = 0
    last = len(segs) - 1
    for k in range(n + 1):
        while i < last and segs[i][2] * n < k * segs[i][3]:
            i += 1
        t0n, t0d, t1n, t1d, eidx, a0n, a0d, a1n, a1d = segs[i]
        rn = (k * t0d - t0n * n) * t1d
        rd = n * (t1n * t0d - t0n * t1d)
        cn = a0n * a1d * rd + rn * (a1n * a0d - a0n * a1d)
        cd = a0d * a1d * rd
        if cd < 0:
            cn, cd = -cn, -cd
        if cn == 0:
            out.append((0, edge_ends[eidx][0], 0, 1))
        elif cn == cd:
            out.append((0, edge_ends[eidx][1], 0, 1))
        else:
            g = gcd(cn, cd)
            out.append((1, eidx, cn // g, cd // g))
    return out
