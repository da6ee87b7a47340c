"""d-separation, implied conditional independences, districts and the
nested (district/ancestral-margin) factorization recursion.

Kernel programs
---------------
Every node of the factorization carries ``kernel``: a tuple of steps that,
applied to the observed joint distribution, computes the node's kernel.

``("marginalize", T)``
    sum the kernel over the random vertices ``T``.
``("district", S, order)``
    replace the kernel ``K`` over random vertices ``order`` (a topological
    order) by ``prod_{v in S} K(x_v | x_{pre(v)}, fixed)``, where each
    conditional is a ratio of partial sums of ``K``.

A :class:`VermaConstraint` is such a program plus the variables the result
must not depend on.  :func:`mdag.sem.constraint_gap` evaluates it.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .errors import InputError, ResourceError
from .graph import Dag, MDag, VertexPartition, as_mdag
from .projection import canonical_dag

#: implied_ci enumerates all conditioning sets; refuse beyond this size.
MAX_CI_VERTICES = 6


def _fmt(s):
    return "{" + ",".join(sorted(s)) + "}"


@dataclass(frozen=True)
class CiStatement:
    a: frozenset
    b: frozenset
    c: frozenset = frozenset()

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, frozenset(str(v) for v in getattr(self, name)))
        if not self.a or not self.b:
            raise InputError("CI statement sides must be non-empty")
        if self.a & self.b or self.a & self.c or self.b & self.c:
            raise InputError("CI statement sets must be disjoint")

    def normalized(self):
        """Representative under swapping the two sides."""
        if sorted(self.b) < sorted(self.a):
            return CiStatement(self.b, self.a, self.c)
        return self

    def sort_key(self):
        return (sorted(self.a), sorted(self.b), len(self.c), sorted(self.c))

    def to_dict(self):
        return {"a": sorted(self.a), "b": sorted(self.b), "c": sorted(self.c)}

    def __str__(self):
        return f"{_fmt(self.a)} _||_ {_fmt(self.b)} | {_fmt(self.c)}"


def _separation_graph(g):
    if isinstance(g, Dag):
        return g
    g = as_mdag(g)
    if g.is_dag():
        return g.dag
    return canonical_dag(g).dag


def d_separated(d, a, b, c=()):
    """d-separation of ``a`` and ``b`` given ``c``.  An mDAG is queried
    through its canonical DAG."""
    dag = _separation_graph(d)
    a, b, c = dag.check(a), dag.check(b), dag.check(c)
    if a & b or a & c or b & c:
        raise InputError("d-separation sets must be disjoint")
    if not a or not b:
        return True
    return kernels.dsep(
        list(dag.parent_masks), list(dag.child_masks), dag.mask(a), dag.mask(b), dag.mask(c)
    )


def implied_ci(g, max_vertices=MAX_CI_VERTICES):
    """All ``{a} _||_ {b} | C`` among the observed vertices of ``g`` implied by
    d-separation in its canonical DAG, with ``a < b``."""
    g = as_mdag(g)
    vs = list(g.vertices)
    if len(vs) > max_vertices:
        raise ResourceError(f"implied_ci enumerates all conditioning sets; {len(vs)} > {max_vertices} vertices")
    dag = _separation_graph(g)
    pa, ch = list(dag.parent_masks), list(dag.child_masks)
    out = []
    for a, b in combinations(vs, 2):
        rest = [v for v in vs if v not in (a, b)]
        ma, mb = dag.mask(a), dag.mask(b)
        for k in range(len(rest) + 1):
            for c in combinations(rest, k):
                if kernels.dsep(pa, ch, ma, mb, dag.mask(c)):
                    out.append(CiStatement({a}, {b}, c))
    return out


def districts(g):
    g = as_mdag(g)
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for f in g.nontrivial_facets:
        first, *rest = sorted(f)
        for v in rest:
            ra, rb = find(first), find(v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    blocks = {}
    for v in g.vertices:
        blocks.setdefault(find(v), set()).add(v)
    return VertexPartition(g.vertices, blocks.values())


@dataclass(eq=False)
class FactorizationNode:
    """A (conditional) graph: ``random_vertices`` carry the kernel, the
    ``conditioning_vertices`` are fixed arguments with no parents."""

    graph: MDag
    random_vertices: frozenset
    conditioning_vertices: frozenset
    children: list = field(default_factory=list)
    kind: str = "root"
    kernel: tuple = ()
    #: vertices of the joint the kernel program starts from
    origin: frozenset = frozenset()

    @property
    def is_leaf(self):
        return not self.children

    @property
    def arguments(self):
        """Variables the kernel, as computed by ``kernel``, is a function of."""
        return kernel_arguments(self.origin or self.graph.vertices, self.kernel)

    def factors(self):
        """``(district, given)`` for each district child, ``given`` being the
        computed kernel's non-random arguments."""
        out = []
        for child in self.children:
            if child.kind == "district":
                out.append((child.random_vertices, child.arguments - child.random_vertices))
        return sorted(out, key=lambda f: (len(f[0]), sorted(f[0])))

    def walk(self):
        seen = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            yield node
            stack.extend(reversed(node.children))


def format_factorization(node):
    """Render the district factorization, e.g. ``q1(x1)·q24(x2,x4|x1,x3)``."""
    terms = []
    for random, given in node.factors():
        name = "q" + "".join(sorted(random))
        xs = ",".join("x" + v for v in sorted(random))
        if given:
            xs += "|" + ",".join("x" + v for v in sorted(given))
        terms.append(f"{name}({xs})")
    return "·".join(terms)


def kernel_arguments(vertices, program):
    """Structural argument set of the kernel computed by ``program``
    starting from a joint over ``vertices``."""
    args = set(vertices)
    random = list(vertices)
    for step in program:
        if step[0] == "marginalize":
            args -= step[1]
            random = [v for v in random if v not in step[1]]
        else:
            _, s, order = step
            new = set()
            for i, v in enumerate(order):
                if v in s:
                    new |= args - set(order[i + 1:])
            args = new
            random = [v for v in order if v in s]
    return frozenset(args)


def district_subgraph(g, d):
    """``G[D]``: vertices ``D | pa(D)``, edges into ``D``, faces inside ``D``."""
    g = as_mdag(g)
    d = g.check(d)
    if d not in set(districts(g).blocks):
        raise InputError(f"{_fmt(d)} is not a district")
    return _district_node(g, d, (("district", d, _random_order(g, g.vertices)),), frozenset(g.vertices))


def _district_node(g, d, program, origin):
    pa = g.parents(d)
    verts = d | pa
    edges = [(a, b) for a, b in g.edges if b in d]
    faces = [f & d for f in g.facets if f & d]
    sub = MDag(verts, edges, faces)
    return FactorizationNode(sub, d, frozenset(pa - d), [], "district", program, origin)


def _random_order(g, random):
    return tuple(v for v in g.topological_order() if v in random)


def _random_districts(g, random):
    """Districts of the bidirected structure restricted to ``random``."""
    sub = g.induced_subgraph(random)
    return districts(sub).blocks


def nested_factorize(g):
    """Recursion tree of district decompositions and ancestral margins.

    Margins drop one childless random vertex at a time; sub-problems are
    memoized on their graph and random set so shared ones appear once.
    """
    g = as_mdag(g)
    memo = {}
    root = FactorizationNode(g, frozenset(g.vertices), frozenset(), [], "root", (), frozenset(g.vertices))
    memo[_node_key(root)] = root
    _expand(root, memo)
    return root


def _node_key(node):
    return (node.graph, node.random_vertices)


def _expand(node, memo):
    g, random = node.graph, node.random_vertices
    order = _random_order(g, random)
    for d in _random_districts(g, random):
        child = _district_node(g, d, node.kernel + (("district", d, order),), node.origin)
        if child.graph == g and child.random_vertices == random:
            continue
        node.children.append(_intern(child, memo))
    if len(random) > 1:
        for r in sorted(random):
            if g.children(r):
                continue
            keep = set(g.vertices) - {r}
            sub = g.induced_subgraph(keep)
            child = FactorizationNode(
                sub,
                random - {r},
                node.conditioning_vertices & keep,
                [],
                "margin",
                node.kernel + (("marginalize", frozenset([r])),),
                node.origin,
            )
            node.children.append(_intern(child, memo))


def _intern(node, memo):
    key = _node_key(node)
    if key in memo:
        return memo[key]
    memo[key] = node
    _expand(node, memo)
    return node


@dataclass(frozen=True)
class VermaConstraint:
    """The kernel computed by ``program`` over ``district`` does not depend
    on ``free`` (it is a function of ``depends_on`` only)."""

    district: frozenset
    program: tuple
    arguments: frozenset
    free: frozenset
    graph: MDag = field(compare=False)

    @property
    def depends_on(self):
        return self.arguments - self.free

    @property
    def statement(self):
        return CiStatement(self.district, self.free, self.arguments - self.free - self.district)

    def describe(self):
        return describe_program(self.program) + f" is independent of {_fmt(self.free)}"

    def to_dict(self):
        return {
            "district": sorted(self.district),
            "free": sorted(self.free),
            "arguments": sorted(self.arguments),
            "program": program_to_json(self.program),
            "text": self.describe(),
        }


def program_to_json(program):
    out = []
    for step in program:
        if step[0] == "marginalize":
            out.append({"op": "marginalize", "vertices": sorted(step[1])})
        else:
            out.append({"op": "district", "vertices": sorted(step[1]), "order": list(step[2])})
    return out


def program_from_json(items):
    out = []
    for item in items:
        if item["op"] == "marginalize":
            out.append(("marginalize", frozenset(item["vertices"])))
        elif item["op"] == "district":
            out.append(("district", frozenset(item["vertices"]), tuple(item["order"])))
        else:
            raise InputError(f"unknown kernel step {item['op']!r}")
    return tuple(out)


def describe_program(program):
    text = "p"
    for step in program:
        if step[0] == "marginalize":
            text = f"sum_{{{','.join('x' + v for v in sorted(step[1]))}}} [{text}]"
        else:
            text = f"district{_fmt(step[1])}[{text}]"
    return text


def verma_constraints(g, seed=0):
    """Invariance constraints surfaced below the first district level.

    A candidate from a district node is kept when its kernel is structurally
    a function of more variables than the node's graph allows, the
    dependence does not vanish on a generic (unconstrained) joint
    distribution, and it is not literally an implied CI of ``g``.
    """
    from .sem import JointTable, program_gap

    g = as_mdag(g)
    root = nested_factorize(g)
    ordinary = {s.normalized() for s in implied_ci(g, max_vertices=max(MAX_CI_VERTICES, len(g.vertices)))}
    rng = np.random.default_rng(seed)
    cards = (2,) * len(g.vertices)
    generic = JointTable(g.vertices, cards, rng.dirichlet(np.ones(2 ** len(g.vertices))).reshape(cards))
    out = []
    seen = set()
    for node in root.walk():
        if node.kind != "district":
            continue
        if sum(1 for step in node.kernel if step[0] == "district") < 2:
            continue
        args = node.arguments
        allowed = node.random_vertices | node.graph.parents(node.random_vertices)
        free = args - allowed
        if not free:
            continue
        key = (node.random_vertices, free, args)
        if key in seen:
            continue
        seen.add(key)
        c = VermaConstraint(node.random_vertices, node.kernel, args, frozenset(free), node.graph)
        if len(c.district) == 1 and len(free) == 1 and c.statement.normalized() in ordinary:
            continue
        if program_gap(generic, c.program, c.free) < 1e-10:
            continue
        out.append(c)
    return out
