"""Perfect interventions on DAGs and mDAGs."""

from .errors import InputError
from .graph import Dag, MDag, as_mdag
from .projection import latent_project


def mutilate_dag(d, a):
    """Delete every edge pointing into ``a``."""
    a = d.check(a)
    return Dag(d.vertices, [(x, y) for x, y in d.edges if y not in a])


def mutilate_mdag(g, a):
    """Delete edges into ``a`` and remove ``a`` from every face."""
    g = as_mdag(g)
    a = g.check(a)
    return MDag(mutilate_dag(g.dag, a), faces=g.faces.remove_vertices(a))


def delete_edges(g, edges):
    """Experimental: cut the given directed edges only.  No equivalence or
    identification result is attached to this operation."""
    g = as_mdag(g)
    drop = {(str(x), str(y)) for x, y in edges}
    missing = drop - set(g.edges)
    if missing:
        raise InputError("not an edge: " + ", ".join(f"{x}->{y}" for x, y in sorted(missing)))
    return MDag(Dag(g.vertices, set(g.edges) - drop), faces=g.faces)


def check_commutation(d, observed, a):
    """Does projecting then intervening agree with intervening then
    projecting?"""
    observed = d.check(observed)
    a = d.check(a)
    if not a <= observed:
        raise InputError("intervened vertices must be observed")
    left = mutilate_mdag(latent_project(MDag(d), observed), a)
    right = latent_project(MDag(mutilate_dag(d, a)), observed)
    return left == right


def distinguishing_intervention(g, h):
    """An intervention set separating two mDAGs whose underlying DAGs differ.

    For the first edge ``v->w`` (in sorted order) present in exactly one of
    the graphs, intervening on everything except ``w`` leaves two DAGs that
    disagree on whether ``v`` and ``w`` are independent.  Returns ``None``
    when the underlying DAGs coincide, which does not mean no intervention
    distinguishes them.
    """
    g, h = as_mdag(g), as_mdag(h)
    if set(g.vertices) != set(h.vertices):
        raise InputError("graphs have different vertex sets")
    diff = sorted(set(g.edges) ^ set(h.edges))
    if not diff:
        return None
    _, w = diff[0]
    return frozenset(g.vertices) - {w}
