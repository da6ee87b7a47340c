"""Rewrites that shrink a DAG-with-latents to its canonical presentation
without changing the marginal model over the observed vertices."""

from collections import Counter
from itertools import permutations

from .errors import InputError
from .graph import Dag


def exogenize(d, u):
    """Join every parent of ``u`` to every child of ``u``, then cut ``u``
    off from its parents."""
    (u,) = d.check([u])
    pa = d.parents(u)
    if not pa:
        return d
    ch = d.children(u)
    edges = {(a, b) for a, b in d.edges if b != u}
    edges.update((l, k) for l in pa for k in ch)
    return Dag(d.vertices, edges)


def _drop(d, w):
    return d.induced_subgraph(set(d.vertices) - {w})


def reduce_latents(d, observed, rng=None):
    """Exogenize all latents, then delete redundant ones until none remain.

    With ``rng`` (a ``random.Random``) rewrite steps are applied in random
    order instead of the default deterministic one; the result is the same
    up to latent names.
    """
    observed = d.check(observed)
    latents = set(d.vertices) - observed
    if rng is None:
        for u in d.topological_order():
            if u in latents:
                d = exogenize(d, u)
    else:
        while True:
            todo = sorted(u for u in latents if d.parents(u))
            if not todo:
                break
            d = exogenize(d, rng.choice(todo))
    while True:
        options = [w for w in sorted(latents) if _removable(d, latents, w)]
        if not options:
            return d
        # default order removes the lexicographically largest candidate first
        w = options[-1] if rng is None else rng.choice(options)
        d = _drop(d, w)
        latents.discard(w)


def _removable(d, latents, w):
    if d.parents(w):
        return False
    ch = d.children(w)
    if len(ch) <= 1:
        return True
    for u in latents:
        if u != w and not d.parents(u):
            cu = d.children(u)
            if ch < cu or (ch == cu and w > u):
                return True
    return False


def equal_up_to_latent_relabel(d1, d2, observed):
    """True iff some bijection between the latent vertices makes the
    graphs identical."""
    observed = frozenset(str(v) for v in observed)
    for d in (d1, d2):
        if not observed <= set(d.vertices):
            raise InputError("observed vertices missing from a graph")
    l1 = sorted(set(d1.vertices) - observed)
    l2 = sorted(set(d2.vertices) - observed)
    if len(l1) != len(l2):
        return False
    obs1 = {(a, b) for a, b in d1.edges if a in observed and b in observed}
    obs2 = {(a, b) for a, b in d2.edges if a in observed and b in observed}
    if obs1 != obs2:
        return False

    def isolated(d, lats):
        ls = set(lats)
        return not any(a in ls and b in ls for a, b in d.edges)

    if isolated(d1, l1) and isolated(d2, l2):
        def sig(d, w):
            return (d.parents(w), d.children(w))

        return Counter(sig(d1, w) for w in l1) == Counter(sig(d2, w) for w in l2)
    if len(l1) > 8:
        raise InputError("too many interconnected latents for exhaustive matching")
    for perm in permutations(l2):
        m = dict(zip(l1, perm))
        m.update((v, v) for v in observed)
        if {(m[a], m[b]) for a, b in d1.edges} == set(d2.edges):
            return True
    return False
