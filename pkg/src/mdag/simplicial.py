"""Abstract simplicial complexes over a finite ground set.

A complex is stored by its facets only.  Every ground-set singleton is a
face, so a vertex lying in no larger face shows up as a singleton facet.
"""

from itertools import combinations

from .errors import InputError


def _key(s):
    return tuple(sorted(s))


def _facet_order(s):
    return (-len(s), _key(s))


class SimplicialComplex:
    """Downward-closed family of non-empty subsets of ``ground``."""

    __slots__ = ("_ground", "_facets", "_hash")

    def __init__(self, ground, facets):
        self._ground = frozenset(ground)
        self._facets = tuple(sorted((frozenset(f) for f in facets), key=_key))
        self._hash = None

    @classmethod
    def from_generators(cls, ground, sets=()):
        ground = frozenset(str(v) for v in ground)
        gens = []
        for s in sets:
            s = frozenset(str(v) for v in s)
            if not s:
                raise InputError("empty generator set")
            extra = s - ground
            if extra:
                raise InputError(f"generator {_fmt(s)} has vertices outside the ground set: {_fmt(extra)}")
            gens.append(s)
        gens.extend(frozenset([v]) for v in ground)
        return cls(ground, maximalize(gens))

    @classmethod
    def trivial(cls, ground):
        return cls.from_generators(ground)

    @property
    def ground_set(self):
        return self._ground

    @property
    def facets(self):
        """All inclusion-maximal faces, sorted lexicographically."""
        return self._facets

    @property
    def nontrivial_facets(self):
        return tuple(f for f in self._facets if len(f) > 1)

    def contains(self, b):
        b = frozenset(str(v) for v in b)
        if not b:
            raise InputError("faces are non-empty")
        return any(b <= f for f in self._facets)

    __contains__ = contains

    def faces(self):
        """Explicit downward closure (exponential in facet size)."""
        out = set()
        for f in self._facets:
            items = sorted(f)
            for k in range(1, len(items) + 1):
                out.update(frozenset(c) for c in combinations(items, k))
        return sorted(out, key=_facet_order)

    def remove_vertices(self, a):
        """Complex on the same ground set with ``a`` deleted from every face."""
        a = frozenset(str(v) for v in a)
        return SimplicialComplex.from_generators(
            self._ground, [f - a for f in self._facets if f - a]
        )

    def restrict(self, a):
        """Faces contained in ``a``, on ground set ``a``."""
        a = frozenset(str(v) for v in a)
        return SimplicialComplex.from_generators(a, [f & a for f in self._facets if f & a])

    def is_subcomplex(self, other):
        return self._ground <= other._ground and all(other.contains(f) for f in self._facets)

    def relabel(self, mapping):
        return SimplicialComplex(
            (mapping[v] for v in self._ground),
            (frozenset(mapping[v] for v in f) for f in self._facets),
        )

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._ground == other._ground and self._facets == other._facets

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._ground, self._facets))
        return self._hash

    def __repr__(self):
        return "SimplicialComplex(" + " ".join(_fmt(f) for f in self._facets) + ")"


def maximalize(sets):
    """Drop duplicates and every set contained in another."""
    uniq = sorted(set(frozenset(s) for s in sets if s), key=_facet_order)
    kept = []
    for s in uniq:
        if not any(s <= k for k in kept):
            kept.append(s)
    return sorted(kept, key=_key)


def from_generators(ground, sets=()):
    return SimplicialComplex.from_generators(ground, sets)


def contains(c, b):
    return c.contains(b)


def remove_vertices(c, a):
    return c.remove_vertices(a)


def _fmt(s):
    return "{" + ",".join(sorted(s)) + "}"
