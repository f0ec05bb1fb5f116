"""Pure-Python twins of the compiled kernels.

Reference implementations: `_speedups` must agree with these exactly
(same outputs, same enumeration order).  Selected by `_kernel` when the
extension is unavailable or COINFREE_PURE is set.

Words are lists of nonzero ints: generator i is i, its inverse is -i.
Track segments are 9-tuples of ints
(t0n, t0d, t1n, t1d, edge_index, a0n, a0d, a1n, a1d)
with all denominators positive and coordinates in [0, 1] measured in the
carrier edge's forward direction.
"""
from __future__ import annotations

from math import gcd


def free_reduce_ints(word):
    out = []
    for s in word:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return out


def _conj_matches(c, u, v):
    work = []
    for s in c:
        if work and work[-1] == -s:
            work.pop()
        else:
            work.append(s)
    for s in u:
        if work and work[-1] == -s:
            work.pop()
        else:
            work.append(s)
    for s in reversed(c):
        s = -s
        if work and work[-1] == -s:
            work.pop()
        else:
            work.append(s)
    return work == v


def brute_conjugator(us, vs, rank, max_len):
    """First reduced word c with len <= max_len and c u_i c^-1 = v_i for all i.

    Enumeration order: length ascending, then lexicographic in the letter
    order 1, -1, 2, -2, ..., rank, -rank.  Returns None when no such
    conjugator exists.  Plain exhaustive search, used as the oracle side
    of the conjugacy decision; keep it free of shortcuts.
    """
    letters = []
    for i in range(1, rank + 1):
        letters.append(i)
        letters.append(-i)
    pairs = list(zip(us, vs))

    def check(c):
        return all(_conj_matches(c, u, v) for u, v in pairs)

    if check([]):
        return []
    c = []

    def dfs(depth, length):
        for s in letters:
            if c and c[-1] == -s:
                continue
            c.append(s)
            if depth + 1 == length:
                if check(c):
                    return list(c)
            else:
                hit = dfs(depth + 1, length)
                if hit is not None:
                    return hit
            c.pop()
        return None

    for length in range(1, max_len + 1):
        hit = dfs(0, length)
        if hit is not None:
            return hit
    return None


def eval_track_grid(segs, resolution, edge_ends):
    """Canonical image point of one track at every grid time k/resolution.

    Returns a list of (kind, index, num, den) for k = 0..resolution:
    kind 0 is a vertex (index into the caller's vertex order), kind 1 an
    interior point of edge index with coordinate num/den in lowest terms.
    """
    n = resolution
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
