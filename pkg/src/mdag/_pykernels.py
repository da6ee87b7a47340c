"""Pure-Python bitmask kernels.

Vertex sets are ints with bit ``i`` standing for internal vertex ``i``.
A graph is passed as a list of child (or parent) masks indexed by vertex.
The compiled twin in ``_ckernels.pyx`` has the same signatures and must
return identical results.
"""


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def is_acyclic(children):
    n = len(children)
    indeg = [0] * n
    for i in range(n):
        for j in _bits(children[i]):
            indeg[j] += 1
    stack = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while stack:
        i = stack.pop()
        seen += 1
        for j in _bits(children[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(j)
    return seen == n


def ancestors_mask(parents, mask):
    result = mask
    frontier = mask
    while frontier:
        nxt = 0
        for i in _bits(frontier):
            nxt |= parents[i]
        frontier = nxt & ~result
        result |= frontier
    return result


def closure_through(children, interior):
    """For each vertex, the vertices reachable by a directed path of length
    at least one whose non-endpoints all lie in ``interior``."""
    n = len(children)
    out = [0] * n
    for i in range(n):
        reached = children[i]
        frontier = reached & interior
        while frontier:
            nxt = 0
            for j in _bits(frontier):
                nxt |= children[j]
            nxt &= ~reached
            reached |= nxt
            frontier = nxt & interior
        out[i] = reached
    return out


def maximal_sets(masks):
    uniq = sorted(set(m for m in masks if m), key=lambda m: (-bin(m).count("1"), m))
    kept = []
    for m in uniq:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return sorted(kept)


def project(children, facets, keep):
    """Latent projection onto ``keep``.

    Returns ``(child_masks, facet_masks)`` in the original index space:
    ``child_masks[i]`` is only meaningful for ``i`` in ``keep``.
    """
    n = len(children)
    latent = ((1 << n) - 1) & ~keep
    reach = closure_through(children, latent)
    kids = [0] * n
    for i in _bits(keep):
        kids[i] = reach[i] & keep & ~(1 << i)
    faces = []
    for f in facets:
        r = f & keep
        for u in _bits(f & latent):
            r |= reach[u] & keep
        if r:
            faces.append(r)
    for i in _bits(keep):
        faces.append(1 << i)
    return kids, maximal_sets(faces)


def dsep(parents, children, x, y, z):
    """True iff ``x`` and ``y`` are d-separated given ``z`` (reachability
    over (vertex, direction) states; colliders open when in an(z))."""
    anz = ancestors_mask(parents, z)
    # states: bit i of up_seen means vertex i reached from a child,
    # bit i of down_seen means reached from a parent
    up_seen = 0
    down_seen = 0
    up_front = x
    down_front = 0
    while up_front or down_front:
        if (up_front | down_front) & y & ~z:
            return False
        up_seen |= up_front
        down_seen |= down_front
        nup = 0
        ndown = 0
        for i in _bits(up_front & ~z):
            nup |= parents[i]
            ndown |= children[i]
        for i in _bits(down_front):
            if not (z >> i) & 1:
                ndown |= children[i]
            if (anz >> i) & 1:
                nup |= parents[i]
        up_front = nup & ~up_seen
        down_front = ndown & ~down_seen
    return True


def permute_mask(mask, perm):
    out = 0
    for i in _bits(mask):
        out |= 1 << perm[i]
    return out


def canonical_key(n, children, facets, perms):
    """Minimum of ``(edge_code, facet_code)`` over ``perms``.

    ``perm[i]`` is the new position of vertex ``i``.  Returns the key and the
    index of the first permutation achieving it.
    """
    best = None
    best_idx = -1
    big = [f for f in facets if f & (f - 1)]
    for idx, perm in enumerate(perms):
        ecode = 0
        for i in range(n):
            pi = perm[i] * n
            for j in _bits(children[i]):
                ecode |= 1 << (pi + perm[j])
        if best is not None and ecode > best[0]:
            continue
        fcode = 0
        for f in big:
            fcode |= 1 << permute_mask(f, perm)
        key = (ecode, fcode)
        if best is None or key < best:
            best = key
            best_idx = idx
    return best, best_idx
