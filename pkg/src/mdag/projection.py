"""Latent projection, hidden common causes and canonical DAGs."""

from collections import deque
from dataclasses import dataclass, field

from . import kernels
from .errors import InputError
from .graph import Dag, MDag, as_mdag

#: Generated latent names start with this character; user vertices may not.
RESERVED_PREFIX = "@"


def latent_name(facet):
    return RESERVED_PREFIX + ",".join(sorted(facet))


@dataclass(frozen=True)
class LabelledCanonicalDag:
    dag: Dag
    facet_labels: dict = field(hash=False)
    observed: frozenset

    @property
    def latents(self):
        return frozenset(self.facet_labels)

    def as_mdag(self):
        return MDag(self.dag)


@dataclass(frozen=True)
class HiddenCommonCause:
    """A face ``face`` and, for each target vertex, a directed path into it."""

    face: frozenset
    paths: dict = field(hash=False)


def canonical_dag(g):
    """Replace every non-trivial facet with a fresh exogenous parent."""
    g = as_mdag(g)
    labels = {}
    edges = set(g.edges)
    for f in g.nontrivial_facets:
        name = latent_name(f)
        labels[name] = f
        edges.update((name, v) for v in f)
    dag = Dag(set(g.vertices) | set(labels), edges)
    return LabelledCanonicalDag(dag, labels, frozenset(g.vertices))


def latent_project(g, v):
    """Project out every vertex not in ``v``."""
    g = as_mdag(g)
    keep = g.check(v)
    if keep == frozenset(g.vertices):
        return g
    kids, faces = kernels.project(list(g.dag.child_masks), g.facet_masks(), g.mask(keep))
    edges = []
    for a in keep:
        for b in g.unmask(kids[g.mask(a).bit_length() - 1]):
            edges.append((a, b))
    return MDag(keep, edges, [g.unmask(f) for f in faces])


def hidden_common_cause(g, w, u):
    """Witness that ``w`` shares a hidden common cause with respect to ``u``.

    Returns ``None`` when no witness exists.  A face ``F`` works (through its
    subface ``F & (u | w)``) exactly when every member of ``w`` is in ``F`` or
    reachable from ``F & u`` by a directed path with interior in ``u``.
    """
    g = as_mdag(g)
    w = g.check(w)
    u = g.check(u)
    if w & u:
        raise InputError("target and latent sets overlap")
    if not w:
        raise InputError("empty target set")
    region = w | u
    if g.faces.contains(w):
        return HiddenCommonCause(w, {x: (x,) for x in sorted(w)})
    umask = g.mask(u)
    reach = kernels.closure_through(list(g.dag.child_masks), umask)
    for f in sorted(g.facets, key=lambda f: (-len(f), sorted(f))):
        b = f & region
        covered = f & w
        for x in b & u:
            covered |= g.unmask(reach[g.mask(x).bit_length() - 1]) & w
        if covered == w:
            paths = {x: _path_into(g, b, x, u) for x in sorted(w)}
            return HiddenCommonCause(frozenset(b), paths)
    return None


def _path_into(g, sources, target, u):
    if target in sources:
        return (target,)
    starts = sorted(sources & u)
    prev = {s: None for s in starts}
    queue = deque(starts)
    while queue:
        x = queue.popleft()
        for y in sorted(g.children(x)):
            if y in prev:
                continue
            if y == target:
                path = [y, x]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return tuple(reversed(path))
            if y in u:
                prev[y] = x
                queue.append(y)
    raise AssertionError("no path although reachability said so")


def project_canonical_roundtrip(g):
    g = as_mdag(g)
    return latent_project(canonical_dag(g).as_mdag(), g.vertices) == g

