"""DAG and mDAG values.

Vertices are opaque strings.  Each graph assigns a dense internal index by
sorted vertex order so the bitmask kernels and every serialization are
reproducible.  Graph values are immutable.
"""

import heapq

from . import kernels
from .errors import CycleError, InputError
from .simplicial import SimplicialComplex


def _as_set(vs):
    if isinstance(vs, str):
        return frozenset([vs])
    return frozenset(str(v) for v in vs)


class Dag:
    """Directed acyclic graph; acyclicity is checked on construction."""

    __slots__ = ("_vertices", "_index", "_edges", "_pa", "_ch", "_hash")

    def __init__(self, vertices, edges=()):
        vs = sorted(set(str(v) for v in vertices))
        index = {v: i for i, v in enumerate(vs)}
        es = set()
        for a, b in edges:
            a, b = str(a), str(b)
            for v in (a, b):
                if v not in index:
                    raise InputError(f"edge {a}->{b} uses unknown vertex {v!r}")
            if a == b:
                raise InputError(f"self-loop {a}->{a} is not allowed")
            es.add((a, b))
        pa = [0] * len(vs)
        ch = [0] * len(vs)
        for a, b in es:
            ch[index[a]] |= 1 << index[b]
            pa[index[b]] |= 1 << index[a]
        if not kernels.is_acyclic(ch):
            raise CycleError(_find_cycle(vs, ch))
        self._vertices = tuple(vs)
        self._index = index
        self._edges = frozenset(es)
        self._pa = tuple(pa)
        self._ch = tuple(ch)
        self._hash = None

    @classmethod
    def from_edges(cls, edges, vertices=()):
        """Build a DAG whose vertex set also includes every edge endpoint."""
        edges = [(str(a), str(b)) for a, b in edges]
        vs = set(str(v) for v in vertices)
        for a, b in edges:
            vs.update((a, b))
        return cls(vs, edges)

    # -- masks ------------------------------------------------------------

    def mask(self, vs):
        m = 0
        for v in _as_set(vs):
            try:
                m |= 1 << self._index[v]
            except KeyError:
                raise InputError(f"unknown vertex {v!r}") from None
        return m

    def unmask(self, m):
        out = []
        i = 0
        while m:
            if m & 1:
                out.append(self._vertices[i])
            m >>= 1
            i += 1
        return frozenset(out)

    def check(self, vs):
        """Normalize a vertex collection, rejecting unknown names."""
        vs = _as_set(vs)
        unknown = vs - set(self._vertices)
        if unknown:
            raise InputError("unknown vertices: " + ", ".join(sorted(unknown)))
        return vs

    @property
    def parent_masks(self):
        return self._pa

    @property
    def child_masks(self):
        return self._ch

    # -- structure --------------------------------------------------------

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        return self._edges

    def sorted_edges(self):
        return sorted(self._edges)

    def parents(self, vs):
        m = 0
        for i in _indices(self.mask(vs)):
            m |= self._pa[i]
        return self.unmask(m)

    def children(self, vs):
        m = 0
        for i in _indices(self.mask(vs)):
            m |= self._ch[i]
        return self.unmask(m)

    def ancestors(self, vs):
        return self.unmask(kernels.ancestors_mask(self._pa, self.mask(vs)))

    def descendants(self, vs):
        return self.unmask(kernels.ancestors_mask(self._ch, self.mask(vs)))

    def is_ancestral(self, vs):
        m = self.mask(vs)
        return kernels.ancestors_mask(self._pa, m) == m

    def topological_order(self):
        """Kahn's order, breaking ties by vertex name."""
        indeg = [bin(p).count("1") for p in self._pa]
        heap = [v for i, v in enumerate(self._vertices) if indeg[i] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            v = heapq.heappop(heap)
            out.append(v)
            for j in _indices(self._ch[self._index[v]]):
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, self._vertices[j])
        return tuple(out)

    def induced_subgraph(self, vs):
        vs = self.check(vs)
        return Dag(vs, [(a, b) for a, b in self._edges if a in vs and b in vs])

    def is_subgraph(self, other):
        return set(self._vertices) <= set(other._vertices) and self._edges <= other._edges

    def relabel(self, mapping):
        return Dag((mapping[v] for v in self._vertices), ((mapping[a], mapping[b]) for a, b in self._edges))

    def __eq__(self, other):
        if not isinstance(other, Dag):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vertices, self._edges))
        return self._hash

    def __repr__(self):
        return "Dag(" + " ".join(f"{a}->{b}" for a, b in self.sorted_edges()) + ")"


class MDag:
    """A DAG together with a simplicial complex of bidirected faces."""

    __slots__ = ("_dag", "_faces", "_hash")

    def __init__(self, vertices, edges=(), faces=()):
        if isinstance(vertices, Dag):
            dag = vertices
        else:
            dag = Dag(vertices, edges)
        if isinstance(faces, SimplicialComplex):
            complex_ = faces
            if complex_.ground_set != frozenset(dag.vertices):
                raise InputError("face ground set differs from the vertex set")
        else:
            complex_ = SimplicialComplex.from_generators(dag.vertices, faces)
        self._dag = dag
        self._faces = complex_
        self._hash = None

    @classmethod
    def from_dag(cls, dag):
        return cls(dag)

    @property
    def dag(self):
        return self._dag

    @property
    def faces(self):
        return self._faces

    @property
    def vertices(self):
        return self._dag.vertices

    @property
    def edges(self):
        return self._dag.edges

    @property
    def facets(self):
        return self._faces.facets

    @property
    def nontrivial_facets(self):
        return self._faces.nontrivial_facets

    def facet_masks(self):
        return [self._dag.mask(f) for f in self._faces.facets]

    def is_dag(self):
        """True when every face is a singleton."""
        return not self._faces.nontrivial_facets

    def mask(self, vs):
        return self._dag.mask(vs)

    def unmask(self, m):
        return self._dag.unmask(m)

    def check(self, vs):
        return self._dag.check(vs)

    def parents(self, vs):
        return self._dag.parents(vs)

    def children(self, vs):
        return self._dag.children(vs)

    def ancestors(self, vs):
        return self._dag.ancestors(vs)

    def descendants(self, vs):
        return self._dag.descendants(vs)

    def is_ancestral(self, vs):
        return self._dag.is_ancestral(vs)

    def topological_order(self):
        return self._dag.topological_order()

    def induced_subgraph(self, vs):
        vs = self.check(vs)
        return MDag(self._dag.induced_subgraph(vs), faces=self._faces.restrict(vs))

    def is_subgraph(self, other):
        return self._dag.is_subgraph(other._dag) and self._faces.is_subcomplex(other._faces)

    def relabel(self, mapping):
        return MDag(self._dag.relabel(mapping), faces=self._faces.relabel(mapping))

    def __eq__(self, other):
        if not isinstance(other, MDag):
            return NotImplemented
        return self._dag == other._dag and self._faces == other._faces

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dag, self._faces))
        return self._hash

    def __repr__(self):
        parts = [f"{a}->{b}" for a, b in self._dag.sorted_edges()]
        parts += ["{" + ",".join(sorted(f)) + "}" for f in self.nontrivial_facets]
        return "MDag(" + " ".join(parts) + ")"


class VertexPartition:
    """Disjoint blocks covering a ground set."""

    __slots__ = ("ground", "blocks")

    def __init__(self, ground, blocks):
        ground = _as_set(ground)
        blocks = [_as_set(b) for b in blocks]
        seen = set()
        for b in blocks:
            if not b:
                raise InputError("empty block")
            if b & seen:
                raise InputError("blocks overlap")
            seen |= b
        if seen != ground:
            raise InputError("blocks do not cover the ground set")
        self.ground = ground
        self.blocks = tuple(sorted(blocks, key=lambda b: tuple(sorted(b))))

    def block_of(self, v):
        for b in self.blocks:
            if v in b:
                return b
        raise InputError(f"unknown vertex {v!r}")

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, VertexPartition):
            return NotImplemented
        return self.ground == other.ground and self.blocks == other.blocks

    def __repr__(self):
        return "VertexPartition(" + " | ".join(",".join(sorted(b)) for b in self.blocks) + ")"


def _indices(m):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def _find_cycle(vertices, ch):
    colour = [0] * len(vertices)
    stack = []

    def visit(i):
        colour[i] = 1
        stack.append(i)
        for j in _indices(ch[i]):
            if colour[j] == 1:
                return stack[stack.index(j):] + [j]
            if colour[j] == 0:
                found = visit(j)
                if found:
                    return found
        colour[i] = 2
        stack.pop()
        return None

    for i in range(len(vertices)):
        if colour[i] == 0:
            found = visit(i)
            if found:
                return [vertices[k] for k in found]
    return []


def as_mdag(g):
    return g if isinstance(g, MDag) else MDag(g)


def ancestors(g, a):
    return g.ancestors(a)


def is_ancestral(g, a):
    return g.is_ancestral(a)


def induced_subgraph(g, a):
    return g.induced_subgraph(a)


def is_subgraph(h, g):
    return as_mdag(h).is_subgraph(as_mdag(g))
