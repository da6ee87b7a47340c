# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels; see ``_pykernels`` for the reference semantics.

Masks are ``uint64``: callers route graphs with more than 64 vertices (or
more than 6 vertices for ``canonical_key``) to the pure-Python kernels.
"""

from libc.stdint cimport uint64_t

ctypedef uint64_t mask_t

cdef enum:
    MAXN = 64


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _low(mask_t m) nogil:
    return __builtin_ctzll(m)


cdef int _load(object seq, mask_t* out) except -1:
    cdef Py_ssize_t n = len(seq)
    cdef Py_ssize_t i
    if n > MAXN:
        raise ValueError("more than 64 vertices")
    for i in range(n):
        out[i] = <mask_t>seq[i]
    return <int>n


def is_acyclic(children):
    cdef mask_t ch[MAXN]
    cdef int indeg[MAXN]
    cdef int stack[MAXN]
    cdef int n = _load(children, ch)
    cdef int i, j, top = 0, seen = 0
    cdef mask_t m
    for i in range(n):
        indeg[i] = 0
    for i in range(n):
        m = ch[i]
        while m:
            j = _low(m)
            m &= m - 1
            indeg[j] += 1
    for i in range(n):
        if indeg[i] == 0:
            stack[top] = i
            top += 1
    while top:
        top -= 1
        i = stack[top]
        seen += 1
        m = ch[i]
        while m:
            j = _low(m)
            m &= m - 1
            indeg[j] -= 1
            if indeg[j] == 0:
                stack[top] = j
                top += 1
    return seen == n


cdef mask_t _ancestors(mask_t* pa, mask_t mask) nogil:
    cdef mask_t result = mask, frontier = mask, nxt, m
    cdef int i
    while frontier:
        nxt = 0
        m = frontier
        while m:
            i = _low(m)
            m &= m - 1
            nxt |= pa[i]
        frontier = nxt & ~result
        result |= frontier
    return result


def ancestors_mask(parents, mask):
    cdef mask_t pa[MAXN]
    _load(parents, pa)
    return _ancestors(pa, <mask_t>mask)


cdef void _closure(mask_t* ch, int n, mask_t interior, mask_t* out) nogil:
    cdef int i, j
    cdef mask_t reached, frontier, nxt, m
    for i in range(n):
        reached = ch[i]
        frontier = reached & interior
        while frontier:
            nxt = 0
            m = frontier
            while m:
                j = _low(m)
                m &= m - 1
                nxt |= ch[j]
            nxt &= ~reached
            reached |= nxt
            frontier = nxt & interior
        out[i] = reached


def closure_through(children, interior):
    cdef mask_t ch[MAXN]
    cdef mask_t out[MAXN]
    cdef int n = _load(children, ch)
    _closure(ch, n, <mask_t>interior, out)
    return [out[i] for i in range(n)]


def maximal_sets(masks):
    cdef list uniq = sorted(set(m for m in masks if m),
                            key=lambda m: (-__builtin_popcountll(m), m))
    cdef list kept = []
    cdef mask_t m, k
    cdef bint covered
    for obj in uniq:
        m = obj
        covered = False
        for kobj in kept:
            k = kobj
            if m & k == m:
                covered = True
                break
        if not covered:
            kept.append(obj)
    return sorted(kept)


def project(children, facets, keep):
    cdef mask_t ch[MAXN]
    cdef mask_t reach[MAXN]
    cdef int n = _load(children, ch)
    cdef mask_t kp = <mask_t>keep
    cdef mask_t full = (<mask_t>1 << n) - 1 if n < 64 else <mask_t>0xFFFFFFFFFFFFFFFF
    cdef mask_t latent = full & ~kp
    cdef mask_t r, m, f
    cdef int i, u
    _closure(ch, n, latent, reach)
    kids = [0] * n
    m = kp
    while m:
        i = _low(m)
        m &= m - 1
        kids[i] = reach[i] & kp & ~(<mask_t>1 << i)
    faces = []
    for fobj in facets:
        f = fobj
        r = f & kp
        m = f & latent
        while m:
            u = _low(m)
            m &= m - 1
            r |= reach[u] & kp
        if r:
            faces.append(r)
    m = kp
    while m:
        i = _low(m)
        m &= m - 1
        faces.append(<mask_t>1 << i)
    return kids, maximal_sets(faces)


def dsep(parents, children, x, y, z):
    cdef mask_t pa[MAXN]
    cdef mask_t ch[MAXN]
    _load(parents, pa)
    _load(children, ch)
    cdef mask_t zm = <mask_t>z, ym = <mask_t>y
    cdef mask_t anz = _ancestors(pa, zm)
    cdef mask_t up_seen = 0, down_seen = 0
    cdef mask_t up_front = <mask_t>x, down_front = 0
    cdef mask_t nup, ndown, m, bit
    cdef int i
    while up_front or down_front:
        if (up_front | down_front) & ym & ~zm:
            return False
        up_seen |= up_front
        down_seen |= down_front
        nup = 0
        ndown = 0
        m = up_front & ~zm
        while m:
            i = _low(m)
            m &= m - 1
            nup |= pa[i]
            ndown |= ch[i]
        m = down_front
        while m:
            i = _low(m)
            m &= m - 1
            bit = <mask_t>1 << i
            if not (zm & bit):
                ndown |= ch[i]
            if anz & bit:
                nup |= pa[i]
        up_front = nup & ~up_seen
        down_front = ndown & ~down_seen
    return True


cdef inline mask_t _perm_mask(mask_t mask, int* perm) nogil:
    cdef mask_t out = 0
    cdef int i
    while mask:
        i = _low(mask)
        mask &= mask - 1
        out |= <mask_t>1 << perm[i]
    return out


def permute_mask(mask, perm):
    cdef int p[MAXN]
    cdef int i
    for i in range(len(perm)):
        p[i] = perm[i]
    return _perm_mask(<mask_t>mask, p)


def canonical_key(int n, children, facets, perms):
    if n > 6:
        raise ValueError("compiled canonical_key supports at most 6 vertices")
    cdef mask_t ch[MAXN]
    _load(children, ch)
    cdef list bigl = [f for f in facets if f & (f - 1)]
    cdef int nb = len(bigl)
    cdef mask_t big[64]
    cdef int p[MAXN]
    cdef int i, j, k, idx = 0, best_idx = -1
    cdef mask_t ecode, fcode, best_e = 0, best_f = 0, m
    cdef int pi
    for k in range(nb):
        big[k] = bigl[k]
    for perm in perms:
        for i in range(n):
            p[i] = perm[i]
        ecode = 0
        for i in range(n):
            pi = p[i] * n
            m = ch[i]
            while m:
                j = _low(m)
                m &= m - 1
                ecode |= <mask_t>1 << (pi + p[j])
        if best_idx >= 0 and ecode > best_e:
            idx += 1
            continue
        fcode = 0
        for k in range(nb):
            fcode |= <mask_t>1 << _perm_mask(big[k], p)
        if best_idx < 0 or ecode < best_e or (ecode == best_e and fcode < best_f):
            best_e = ecode
            best_f = fcode
            best_idx = idx
        idx += 1
    return (best_e, best_f), best_idx
