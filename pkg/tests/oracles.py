"""Slow, obviously-correct reference implementations used by the tests.

Nothing here touches the package's bitmask kernels: graphs are handled as
plain Python sets of names and edge pairs.
"""

from itertools import combinations, permutations, product


def naive_acyclic(vertices, edges):
    remaining = set(vertices)
    edges = set(edges)
    while remaining:
        sources = [v for v in remaining if not any(b == v and a in remaining for a, b in edges)]
        if not sources:
            return False
        remaining -= set(sources)
    return True


def all_dags(vertices):
    """Every DAG on ``vertices`` as a frozenset of edges, by brute force over
    all subsets of ordered pairs."""
    pairs = [(a, b) for a in vertices for b in vertices if a != b]
    out = []
    for bits in product((0, 1), repeat=len(pairs)):
        edges = frozenset(p for p, keep in zip(pairs, bits) if keep)
        if any((b, a) in edges for a, b in edges):
            continue
        if naive_acyclic(vertices, edges):
            out.append(edges)
    return out


def all_complexes(vertices):
    """Every simplicial complex on ``vertices`` (as its set of faces of size
    at least two), by filtering all families for downward closure."""
    big = [frozenset(s) for k in range(2, len(vertices) + 1) for s in combinations(vertices, k)]
    out = []
    for bits in product((0, 1), repeat=len(big)):
        fam = {s for s, keep in zip(big, bits) if keep}
        if all(frozenset(t) in fam for s in fam if len(s) > 2 for t in combinations(s, len(s) - 1)):
            out.append(frozenset(fam))
    return out


def facets_of(faces, vertices):
    """Maximal members of ``faces`` plus uncovered singletons."""
    faces = {frozenset(f) for f in faces}
    faces |= {frozenset([v]) for v in vertices}
    return {f for f in faces if not any(f < g for g in faces)}


def descendants(edges, v):
    seen, todo = {v}, [v]
    while todo:
        x = todo.pop()
        for a, b in edges:
            if a == x and b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


def dsep_by_paths(vertices, edges, x, y, z):
    """d-separation by listing every simple path in the skeleton between
    ``x`` and ``y`` and checking each for a blocking vertex."""
    z = set(z)
    edges = set(edges)
    nbrs = {v: set() for v in vertices}
    for a, b in edges:
        nbrs[a].add(b)
        nbrs[b].add(a)

    def blocked(path):
        for i in range(1, len(path) - 1):
            prev, mid, nxt = path[i - 1], path[i], path[i + 1]
            collider = (prev, mid) in edges and (nxt, mid) in edges
            if collider:
                if not (descendants(edges, mid) & z):
                    return True
            elif mid in z:
                return True
        return False

    def walk(path):
        last = path[-1]
        if last == y:
            yield path
            return
        for n in sorted(nbrs[last]):
            if n not in path:
                yield from walk(path + [n])

    return all(blocked(p) for p in walk([x]))


def project_by_paths(vertices, edges, latent_vertices):
    """Latent projection from the definition, for a DAG given by plain sets.

    Returns ``(edges, facets)`` over the observed vertices.
    """
    latent = set(latent_vertices)
    observed = [v for v in vertices if v not in latent]
    succ = {v: {b for a, b in edges if a == v} for v in vertices}

    def reach_through_latent(start):
        # observed vertices reachable from start with all interior vertices latent
        hit, seen, todo = set(), {start}, [start]
        while todo:
            x = todo.pop()
            for c in succ[x]:
                if c in latent:
                    if c not in seen:
                        seen.add(c)
                        todo.append(c)
                else:
                    hit.add(c)
        return hit

    new_edges = {(a, b) for a in observed for b in reach_through_latent(a)}
    faces = [reach_through_latent(u) for u in latent]
    return new_edges, facets_of([f for f in faces if f], observed)


def canonical_form(vertices, edges, facets):
    """Smallest relabelled encoding over all permutations."""
    vs = sorted(vertices)
    best = None
    for perm in permutations(range(len(vs))):
        m = {v: perm[i] for i, v in enumerate(vs)}
        e = tuple(sorted((m[a], m[b]) for a, b in edges))
        f = tuple(sorted(tuple(sorted(m[v] for v in s)) for s in facets if len(s) > 1))
        key = (e, f)
        if best is None or key < best:
            best = key
    return best
