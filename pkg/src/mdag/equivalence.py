"""Skeletons, the facet-split rewrite, enumeration of small mDAGs and a
partial classification into (marginal) Markov-equivalence classes.

Classification merges graphs only by rewrites that provably preserve the
model and separates classes only by provably necessary differences; any
remaining pair is reported as undecided.

Merge rules
    * facet split (both directions);
    * sandwich: ``H <= G <= K`` as subgraphs with ``H ~ K`` puts ``G`` in
      their class, since models are monotone under subgraphs;
    * vertex permutation, when classifying up to isomorphism.

Separation certificates
    * ``skeleton``: different skeletons (valid for discrete state spaces);
    * ``ci``: different sets of implied conditional independences;
    * ``bidirected``: distinct graphs without directed edges;
    * ``margin``: one of the above for the latent projections onto a subset;
    * ``verma``: an equality constraint of one model, confirmed on models
      of that class, fails on an exact joint of the other;
    * ``instrumental``: a distribution of one model breaking the
      instrumental inequality, which the other model satisfies because
      its margin is a subgraph of an instrumental pattern.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

import numpy as np

from . import kernels
from .errors import ConsistencyError, InputError, MDagError, ResourceError
from .graph import Dag, MDag, as_mdag
from .markov import implied_ci
from .projection import latent_project
from .simplicial import SimplicialComplex

#: enumerate_mdags refuses larger n (labelled, unlabelled).
LABELLED_CAP = 4
UNLABELLED_CAP = 4

#: A constraint counts as holding below VERMA_HOLDS and as broken above
#: VERMA_BREAKS (exact joints; floating-point noise is near 1e-15).
VERMA_HOLDS = 1e-9
VERMA_BREAKS = 1e-6

#: Sandwich merging scans every graph (one per orbit up to isomorphism)
#: against the whole universe; skip it above this many scans.
SANDWICH_LIMIT = 20000


@dataclass(frozen=True)
class Skeleton:
    vertices: frozenset
    edges: frozenset

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2 or not e <= self.vertices:
                raise InputError("skeleton edges must be pairs of vertices")

    def sorted_edges(self):
        return sorted(tuple(sorted(e)) for e in self.edges)


def skeleton(g):
    g = as_mdag(g)
    pairs = {frozenset(e) for e in g.edges}
    for f in g.nontrivial_facets:
        pairs.update(frozenset(p) for p in combinations(sorted(f), 2))
    return Skeleton(frozenset(g.vertices), frozenset(pairs))


# -- facet splitting ----------------------------------------------------------


class FacetSplitError(InputError):
    """A facet split precondition fails; ``condition`` is ``"i"`` or ``"ii"``."""

    def __init__(self, condition, message):
        self.condition = condition
        super().__init__(f"condition ({condition}) fails: {message}")


def facet_split(g, b, c):
    """Split facet ``b`` into ``c`` and ``d = b - c`` and add every edge
    ``c' -> d'``.

    Requires (i) every face meeting ``c`` to lie inside ``b`` and (ii)
    ``pa(d') >= pa(c)`` for each ``d'`` in ``d``, where ``pa(c)`` is the
    union of the parents of ``c``.
    """
    g = as_mdag(g)
    b, c = g.check(b), g.check(c)
    if b not in g.facets or len(b) < 2:
        raise InputError("{" + ",".join(sorted(b)) + "} is not a non-trivial facet")
    d = b - c
    if not c or not d or not c <= b:
        raise InputError("c must be a non-empty proper subset of b")
    for f in g.facets:
        if f & c and not f <= b:
            raise FacetSplitError("i", "face {" + ",".join(sorted(f)) + "} meets c outside b")
    pc = g.parents(c)
    for v in sorted(d):
        missing = pc - g.parents(v)
        if missing:
            raise FacetSplitError("ii", f"pa({v}) lacks " + ",".join(sorted(missing)))
    return _split(g, b, c, d)


def _split(g, b, c, d):
    edges = set(g.edges) | {(x, y) for x in c for y in d}
    faces = [f for f in g.facets if f != b] + [c, d]
    return MDag(Dag(g.vertices, edges), faces=SimplicialComplex.from_generators(g.vertices, faces))


def legal_splits(g):
    """Every ``(b, c, result)`` for which facet_split succeeds."""
    g = as_mdag(g)
    out = []
    for b in g.nontrivial_facets:
        items = sorted(b)
        others = [f for f in g.facets if f != b]
        for k in range(1, len(items)):
            for cs in combinations(items, k):
                c = frozenset(cs)
                if any(f & c for f in others):
                    continue
                d = b - c
                pc = g.parents(c)
                if all(pc <= g.parents(v) for v in d):
                    out.append((b, c, _split(g, b, c, d)))
    return out


# -- enumeration --------------------------------------------------------------


def _names(n):
    return [str(i + 1) for i in range(n)]


def labelled_dags(n):
    """All DAGs on vertices ``1..n`` (one orientation choice per pair)."""
    vs = _names(n)
    pairs = list(combinations(range(n), 2))
    for choice in product((0, 1, 2), repeat=len(pairs)):
        ch = [0] * n
        edges = []
        for (i, j), c in zip(pairs, choice):
            if c == 1:
                ch[i] |= 1 << j
                edges.append((vs[i], vs[j]))
            elif c == 2:
                ch[j] |= 1 << i
                edges.append((vs[j], vs[i]))
        if kernels.is_acyclic(ch):
            yield Dag(vs, edges)


def simplicial_complexes(n):
    """All complexes on ``1..n`` containing every singleton, listed by their
    non-trivial facets (antichains of sets of size at least two)."""
    vs = _names(n)
    subsets = [m for m in range(1, 1 << n) if m & (m - 1)]
    subsets.sort(key=lambda m: (-bin(m).count("1"), m))
    out = []

    def grow(start, chosen):
        out.append(list(chosen))
        for i in range(start, len(subsets)):
            m = subsets[i]
            if all(m & c != m for c in chosen):
                chosen.append(m)
                grow(i + 1, chosen)
                chosen.pop()

    grow(0, [])
    complexes = []
    for facets in out:
        sets = [frozenset(vs[i] for i in range(n) if m >> i & 1) for m in facets]
        complexes.append(SimplicialComplex.from_generators(vs, sets))
    complexes.sort(key=lambda c: (len(c.nontrivial_facets), [sorted(f) for f in c.nontrivial_facets]))
    return complexes


def iter_mdags(n, up_to_iso=False):
    """Lazily yield mDAGs on ``1..n``; no size cap."""
    if n < 0:
        raise InputError("n must be non-negative")
    complexes = simplicial_complexes(n)
    seen = set()
    perms = list(permutations(range(n)))
    for d in labelled_dags(n):
        for c in complexes:
            g = MDag(d, faces=c)
            if up_to_iso:
                key = _iso_key(g, perms)[0]
                if key in seen:
                    continue
                seen.add(key)
            yield g


def enumerate_mdags(n, up_to_iso=False, labelled_cap=LABELLED_CAP, unlabelled_cap=UNLABELLED_CAP, threads=1):
    """All mDAGs on ``1..n`` in a fixed order; the first labelled member of
    each isomorphism class represents it when ``up_to_iso``.  The order does
    not depend on ``threads``."""
    cap = unlabelled_cap if up_to_iso else labelled_cap
    if n > cap:
        raise ResourceError(f"enumeration of {'unlabelled' if up_to_iso else 'labelled'} mDAGs is capped at n={cap}")
    if threads <= 1 or not up_to_iso:
        return list(iter_mdags(n, up_to_iso))
    complexes = simplicial_complexes(n)
    perms = list(permutations(range(n)))

    def keyed(d):
        return [(_iso_key(g, perms)[0], g) for g in (MDag(d, faces=c) for c in complexes)]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks = list(pool.map(keyed, labelled_dags(n)))
    seen = set()
    out = []
    for chunk in chunks:
        for key, g in chunk:
            if key not in seen:
                seen.add(key)
                out.append(g)
    return out


# -- isomorphism --------------------------------------------------------------


@dataclass(frozen=True)
class IsoForm:
    """``graph`` is ``g`` relabelled by ``mapping`` onto ``0..n-1``; equal
    keys mean isomorphic graphs."""

    key: tuple
    graph: MDag
    mapping: dict = field(hash=False, compare=False)


def _iso_key(g, perms):
    n = len(g.vertices)
    return kernels.canonical_key(n, list(g.dag.child_masks), g.facet_masks(), perms)


def canonical_iso_form(g):
    g = as_mdag(g)
    n = len(g.vertices)
    if n > 7:
        raise ResourceError("exhaustive isomorphism search is limited to 7 vertices")
    perms = list(permutations(range(n)))
    key, idx = _iso_key(g, perms)
    perm = perms[idx]
    mapping = {v: str(perm[i]) for i, v in enumerate(g.vertices)}
    return IsoForm((n,) + tuple(key), g.relabel(mapping), mapping)


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class Separation:
    kind: str
    detail: str
    discrete_only: bool = False

    def to_dict(self):
        return {"kind": self.kind, "detail": self.detail, "discrete_only": self.discrete_only}


UNDECIDED = Separation("undecided", "no certificate found")


@dataclass
class EquivalenceReport:
    """``classes`` partition the input graphs.  ``certificates[(i, k)]`` is the
    merge chain joining member ``k`` of class ``i`` to its first member;
    ``separations[(i, j)]`` certifies that classes ``i < j`` differ."""

    classes: list
    certificates: dict
    separations: dict
    up_to_iso: bool

    @property
    def undecided(self):
        return [pair for pair, s in self.separations.items() if s.kind == "undecided"]

    def to_dict(self):
        from .textformat import mdag_to_json

        return {
            "schema": "mdag.equivalence-report/1",
            "up_to_iso": self.up_to_iso,
            "classes": [[mdag_to_json(g) for g in cls] for cls in self.classes],
            "certificates": [
                {"class": i, "member": k, "chain": chain} for (i, k), chain in sorted(self.certificates.items())
            ],
            "separations": [
                {"classes": [i, j], **s.to_dict()} for (i, j), s in sorted(self.separations.items())
            ],
        }


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        a, b = self.find(i), self.find(j)
        if a == b:
            return False
        self.parent[max(a, b)] = min(a, b)
        return True


class _Relabeller:
    """Vertex permutations acting on subgraph codes of graphs with vertex
    set ``vertices``; ``maps[p]`` is the ``p``-th permutation as a dict."""

    def __init__(self, vertices):
        self.vertices = tuple(vertices)
        nv = len(self.vertices)
        self.nv = nv
        self.maps = [dict(zip(self.vertices, p)) for p in permutations(self.vertices)]
        base = nv * nv
        width = base + 2 ** nv
        self.tables = []
        for p in permutations(range(nv)):
            target = [0] * width
            for i in range(nv):
                for j in range(nv):
                    target[i * nv + j] = p[i] * nv + p[j]
            for sub in range(1, 2 ** nv):
                target[base + sub] = base + sum(1 << p[i] for i in range(nv) if sub >> i & 1)
            chunks = []
            for lo in range(0, width, 8):
                table = []
                for byte in range(256):
                    out = 0
                    for k in range(8):
                        if byte >> k & 1 and lo + k < width:
                            out |= 1 << target[lo + k]
                    table.append(out)
                chunks.append(table)
            self.tables.append(chunks)

    def permute(self, code, p):
        out = 0
        for table in self.tables[p]:
            if not code:
                break
            out |= table[code & 255]
            code >>= 8
        return out

    def decode(self, code):
        vs, nv = self.vertices, self.nv
        edges = [(vs[i], vs[j]) for i in range(nv) for j in range(nv) if code >> (i * nv + j) & 1]
        base = nv * nv
        faces = [
            [vs[i] for i in range(nv) if sub >> i & 1]
            for sub in range(3, 2 ** nv)
            if sub & (sub - 1) and code >> (base + sub) & 1
        ]
        return MDag(vs, edges, faces)


def _permutation_table(codes, nv):
    """``table[p, i]`` is the universe index of graph ``i`` relabelled by the
    ``p``-th vertex permutation; the universe must be closed under
    relabelling."""
    order = np.argsort(codes, kind="stable")
    ranked = codes[order]
    base = nv * nv
    rows = []
    for p in permutations(range(nv)):
        target = [0] * (base + 2 ** nv)
        for i in range(nv):
            for j in range(nv):
                target[i * nv + j] = p[i] * nv + p[j]
        for sub in range(1, 2 ** nv):
            target[base + sub] = base + sum(1 << p[i] for i in range(nv) if sub >> i & 1)
        moved = np.zeros_like(codes)
        one = np.uint64(1)
        for bit, t in enumerate(target):
            moved |= ((codes >> np.uint64(bit)) & one) << np.uint64(t)
        pos = np.searchsorted(ranked, moved)
        if not np.array_equal(ranked[np.minimum(pos, len(ranked) - 1)], moved):
            raise AssertionError("universe is not closed under relabelling")
        rows.append(order[pos])
    return np.array(rows)


def _fmt(s):
    return "{" + ",".join(sorted(s)) + "}"


def _describe(g):
    return repr(g)[5:-1] or "(no edges)"


def _subgraph_code(g):
    n = len(g.vertices)
    code = 0
    for i, m in enumerate(g.dag.child_masks):
        code |= m << (i * n)
    base = n * n
    for f in g.facet_masks():
        sub = f
        while sub:
            if sub & (sub - 1):
                code |= 1 << (base + sub)
            sub = (sub - 1) & f
    return code


class _Classifier:
    def __init__(self, graphs, up_to_iso, witness_search, sandwich):
        self.up_to_iso = up_to_iso
        self.witness_search = witness_search
        self.universe = []
        self.index = {}
        self.edges = {}
        self.sandwich = sandwich
        self._ci = {}
        self._witness = {}
        self._margins = {}
        self._members = None
        self._skeletons = {}
        self._descriptions = {}
        self._verma = {}
        self._joints = {}
        self.codes = []
        self.code_index = {}
        self.relabeller = None
        if up_to_iso:
            vs = graphs[0].vertices
            if len(vs) > 5:
                raise ResourceError("classification up to isomorphism is limited to 5 vertices")
            self.relabeller = _Relabeller(vs)
        pending = []
        for g in graphs:
            pending.extend(self._add(g))
        while pending:
            i = pending.pop()
            for b, c, h in legal_splits(self.universe[i]):
                pending.extend(self._add(h))
                self._link(i, self.index[h], f"facet_split(b={_fmt(b)}, c={_fmt(c)})")

    def _add(self, g):
        """Insert ``g`` (and its relabellings when classifying up to
        isomorphism); return indices of new graphs."""
        new = []
        code = _subgraph_code(g)
        if self.relabeller is None:
            items = [(code, g)] if g not in self.index else []
        else:
            rel = self.relabeller
            items = []
            for p in range(len(rel.maps)):
                c = rel.permute(code, p)
                if c not in self.code_index:
                    self.code_index[c] = None
                    items.append((c, rel.decode(c)))
        for c, h in items:
            i = len(self.universe)
            self.index[h] = i
            if self.relabeller is not None:
                self.code_index[c] = i
            self.universe.append(h)
            self.codes.append(c)
            new.append(i)
        return new

    def relabelled(self, i):
        """``(mapping, index)`` for every relabelling of universe graph ``i``."""
        rel = self.relabeller
        return [(m, self.code_index[rel.permute(self.codes[i], p)]) for p, m in enumerate(rel.maps)]

    def describe(self, i):
        if i not in self._descriptions:
            self._descriptions[i] = _describe(self.universe[i])
        return self._descriptions[i]

    def skeleton_of(self, i):
        if i not in self._skeletons:
            self._skeletons[i] = skeleton(self.universe[i])
        return self._skeletons[i]

    def _link(self, i, j, reason):
        self.edges.setdefault(i, []).append((j, reason))
        self.edges.setdefault(j, []).append((i, reason + " reversed"))

    # labelled-model classes --------------------------------------------

    def labelled_classes(self):
        uf = _UnionFind(len(self.universe))
        for i, nbrs in self.edges.items():
            for j, _ in nbrs:
                uf.union(i, j)
        n = len(self.universe)
        if self.sandwich:
            self._sandwich(uf)
        self.uf = uf
        members = {}
        for i in range(n):
            members.setdefault(uf.find(i), []).append(i)
        self._members = members
        self._pure = {r: [i for i in ms if not self.universe[i].edges] for r, ms in members.items()}
        self._check_consistency()
        return uf

    def _sandwich(self, uf):
        universe = self.universe
        nv = len(universe[0].vertices)
        codes = self.codes
        if nv * nv + 2 ** nv <= 64:
            arr = np.array(codes, dtype=np.uint64)
            perms = _permutation_table(arr, nv) if self.up_to_iso else np.arange(len(arr))[None, :]
            reps = np.unique(perms.min(axis=0))
            if len(reps) <= SANDWICH_LIMIT:
                self._sandwich_scan(uf, arr, perms, reps)
        elif len(universe) <= 2000:
            self._sandwich_scan(uf, codes, None, range(len(codes)))

    def _sandwich_scan(self, uf, codes, perms, reps):
        """Repeat until stable: for each representative ``g``, join it to
        every class with members both below and above it.  With ``perms``
        (rows are vertex permutations acting on universe indices) each
        join is applied to all relabellings, so one graph per orbit is
        enough."""
        n = len(codes)
        vectorized = perms is not None
        changed = True
        while changed:
            changed = False
            roots = np.fromiter((uf.find(i) for i in range(n)), dtype=np.int64, count=n)
            for g in reps:
                if vectorized:
                    c = codes[g]
                    below = (codes & ~c) == 0
                    above = (codes & c) == c
                else:
                    c = codes[g]
                    below = np.array([(x & ~c) == 0 for x in codes])
                    above = np.array([(c & ~x) == 0 for x in codes])
                below[g] = above[g] = False
                for r in np.intersect1d(roots[below], roots[above]):
                    if uf.find(int(r)) == uf.find(int(g)):
                        continue
                    h = int(np.flatnonzero(below & (roots == r))[0])
                    k = int(np.flatnonzero(above & (roots == r))[0])
                    rows = perms if vectorized else [range(n)]
                    for row in rows:
                        a, b, lo = int(row[g]), int(row[k]), int(row[h])
                        if uf.union(a, b):
                            changed = True
                            self._link(
                                a, b,
                                f"sandwich({_describe(self.universe[lo])} <= . <= {_describe(self.universe[b])})",
                            )

    def _ci_set(self, i):
        if i not in self._ci:
            self._ci[i] = frozenset(s.normalized() for s in implied_ci(self.universe[i]))
        return self._ci[i]

    def _check_consistency(self):
        for root, ms in self._members.items():
            g = self.universe[ms[0]]
            sk, ci = self.skeleton_of(ms[0]), self._ci_set(ms[0])
            pure = self._pure[root]
            if len(pure) > 1:
                raise ConsistencyError(
                    "merged distinct bidirected graphs " + ", ".join(_describe(self.universe[i]) for i in pure[:2])
                )
            for i in ms[1:]:
                if self.skeleton_of(i) != sk or self._ci_set(i) != ci:
                    raise ConsistencyError(
                        f"merged {_describe(g)} with {_describe(self.universe[i])} despite a separation certificate"
                    )

    # separations between labelled-model classes -------------------------

    def separate(self, a, b):
        """Certificate that labelled classes with roots ``a`` and ``b`` differ."""
        ga = self.universe[a]
        if self.skeleton_of(a) != self.skeleton_of(b):
            return Separation("skeleton", f"{self.describe(a)} vs {self.describe(b)}", True)
        if self._ci_set(a) != self._ci_set(b):
            diff = sorted(self._ci_set(a) ^ self._ci_set(b), key=lambda s: s.sort_key())[0]
            return Separation("ci", f"{diff} holds in exactly one model")
        ma, mb = self._members[a], self._members[b]
        pa, pb = self._pure[a], self._pure[b]
        if pa and pb:
            return Separation("bidirected", f"{self.describe(pa[0])} vs {self.describe(pb[0])}")
        vs = ga.vertices
        for k in range(len(vs) - 1, 1, -1):
            for w in combinations(vs, k):
                sep = self._separate_margin(ma, mb, frozenset(w))
                if sep is not None:
                    return sep
        sep = self._separate_verma(a, b) or self._separate_verma(b, a)
        if sep is not None:
            return sep
        if self.witness_search:
            for w in combinations(vs, 3):
                sep = self._instrumental(ma, mb, w) or self._instrumental(mb, ma, w)
                if sep is not None:
                    return sep
        return UNDECIDED

    def _margin(self, ms, w):
        """Projected skeleton of the first member and the purely bidirected
        projections of up to 64 members, cached per class."""
        key = (ms[0], w)
        if key not in self._margins:
            sk = skeleton(latent_project(self.universe[ms[0]], w))
            proj = {latent_project(self.universe[i], w) for i in ms[:64]}
            self._margins[key] = (sk, sorted((g for g in proj if not g.edges), key=_describe))
        return self._margins[key]

    def _separate_margin(self, ma, mb, w):
        ska, pa = self._margin(ma, w)
        skb, pb = self._margin(mb, w)
        if ska != skb:
            return Separation("margin", f"skeletons differ on {_fmt(w)}", True)
        for x in pa:
            for y in pb:
                if x != y:
                    return Separation("margin", f"bidirected margins on {_fmt(w)}: {_describe(x)} vs {_describe(y)}")
        return None

    def _joint(self, i, seed):
        from .sem import canonical_sem_joint

        key = (i, seed)
        if key not in self._joints:
            self._joints[key] = canonical_sem_joint(self.universe[i], seed)
        return self._joints[key]

    def _constraints(self, root):
        """Verma constraints of the class, each confirmed numerically on
        models of several members before it may certify anything."""
        from .markov import verma_constraints
        from .sem import constraint_gap

        if root not in self._verma:
            ms = self._members[root]
            kept = []
            for c in verma_constraints(self.universe[ms[0]]):
                try:
                    ok = all(
                        constraint_gap(self._joint(i, seed), c) < VERMA_HOLDS
                        for i in ms[:8]
                        for seed in (0, 1)
                    )
                except MDagError:
                    ok = False
                if ok:
                    kept.append(c)
            self._verma[root] = kept
        return self._verma[root]

    def _separate_verma(self, a, b):
        """A constraint of class ``a`` broken by a model of class ``b``."""
        from .sem import constraint_gap

        for c in self._constraints(a):
            try:
                gap = constraint_gap(self._joint(self._members[b][0], 0), c)
            except MDagError:
                continue
            if gap > VERMA_BREAKS:
                return Separation("verma", f"{c.describe()} fails in the other model (gap {gap:.2e})")
        return None

    def _instrumental(self, ma, mb, w):
        """Does some model in ``ma`` break an instrumental inequality that
        the margin of ``mb`` must satisfy?"""
        from .sem import instrumental_violation_search

        w = frozenset(w)
        for z, x, y in permutations(sorted(w)):
            allowed_edges = {(z, x), (x, y)}
            allowed_face = frozenset([x, y])

            def inside(g):
                p = latent_project(g, w)
                return set(p.edges) <= allowed_edges and all(f <= allowed_face for f in p.nontrivial_facets)

            if not any(inside(self.universe[i]) for i in mb[:64]):
                continue
            if any(inside(self.universe[i]) for i in ma[:64]):
                continue
            # the search depends only on the margin up to renaming
            g = latent_project(self.universe[ma[0]], w).relabel({z: "z", x: "x", y: "y"})
            if g not in self._witness:
                self._witness[g] = instrumental_violation_search(g, "z", "x", "y")[0]
            if self._witness[g] > 1 + 1e-6:
                return Separation(
                    "instrumental",
                    f"max_x sum_y max_z P(x,y|z) = {self._witness[g]:.6f} > 1 with (z,x,y)=({z},{x},{y})",
                    True,
                )
        return None

    def chains(self, src, dsts):
        """Merge steps from ``src`` to each of ``dsts`` (one breadth-first
        search)."""
        prev = {src: None}
        queue = [src]
        for i in queue:
            for j, why in self.edges.get(i, ()):
                if j not in prev:
                    prev[j] = (i, why)
                    queue.append(j)
        out = []
        for dst in dsts:
            if dst not in prev:
                out.append(None)
                continue
            steps = []
            while prev[dst] is not None:
                i, why = prev[dst]
                steps.append({"from": _describe(self.universe[i]), "to": _describe(self.universe[dst]), "rule": why})
                dst = i
            out.append(steps[::-1])
        return out

    def chain(self, src, dst):
        return self.chains(src, [dst])[0]


def equivalence_classes(graphs, up_to_iso=False, witness_search=None, sandwich=True):
    """Partition ``graphs`` into model classes as far as the known rules allow.

    ``witness_search`` (default: on for graphs with at most three vertices)
    enables the randomized instrumental-inequality certificate.
    """
    graphs = [as_mdag(g) for g in graphs]
    if not graphs:
        return EquivalenceReport([], {}, {}, up_to_iso)
    sizes = {len(g.vertices) for g in graphs}
    if len(sizes) != 1:
        raise InputError("all graphs must have the same number of vertices")
    if up_to_iso and len({frozenset(g.vertices) for g in graphs}) != 1:
        raise InputError("isomorphism classes need a common vertex set")
    n = sizes.pop()
    if witness_search is None:
        witness_search = n <= 3
    cl = _Classifier(graphs, up_to_iso, witness_search, sandwich)
    uf = cl.labelled_classes()
    ids = [cl.index[g] for g in graphs]
    # final classes: labelled classes, joined across relabellings if requested
    final = _UnionFind(len(cl.universe))
    for i in range(len(cl.universe)):
        final.union(i, uf.find(i))
    if up_to_iso:
        for i in ids:
            for m, j in cl.relabelled(i):
                if final.union(i, j):
                    perm = ",".join(f"{k}->{v}" for k, v in sorted(m.items()) if k != v)
                    cl._link(i, j, f"isomorphism({perm})")
    groups = {}
    order = []
    for pos, i in enumerate(ids):
        r = final.find(i)
        if r not in groups:
            groups[r] = []
            order.append(r)
        if all(cl.universe[i] != cl.universe[ids[p]] for p in groups[r]):
            groups[r].append(pos)
    classes = [[graphs[p] for p in groups[r]] for r in order]
    certificates = {}
    for ci_, r in enumerate(order):
        first = ids[groups[r][0]]
        rest = groups[r][1:]
        for k, chain in enumerate(cl.chains(first, [ids[p] for p in rest]), 1):
            certificates[(ci_, k)] = chain
    separations = {}
    cache = {}

    def sep_labelled(a, b):
        a, b = uf.find(a), uf.find(b)
        key = (min(a, b), max(a, b))
        if key not in cache:
            cache[key] = cl.separate(*key)
        return cache[key]

    inv = {}
    if up_to_iso:
        for r in order:
            i = ids[groups[r][0]]
            inv[r] = _class_invariants(cl.universe[i], cl._ci_set(i))
    for x, y in combinations(range(len(order)), 2):
        rx, ry = order[x], order[y]
        g, h = ids[groups[rx][0]], ids[groups[ry][0]]
        if not up_to_iso:
            separations[(x, y)] = sep_labelled(g, h)
            continue
        if inv[rx][0] != inv[ry][0]:
            separations[(x, y)] = Separation("skeleton", "skeletons are not isomorphic", True)
            continue
        if inv[rx][1] != inv[ry][1]:
            separations[(x, y)] = Separation("ci", "implied independence sets are not isomorphic")
            continue
        found = []
        for _, hh in cl.relabelled(h):
            s = sep_labelled(g, hh)
            found.append(s)
            if s.kind == "undecided":
                break
        if any(s.kind == "undecided" for s in found):
            separations[(x, y)] = UNDECIDED
        else:
            kinds = sorted({s.kind for s in found})
            separations[(x, y)] = Separation(
                "+".join(kinds),
                "every relabelling separated; e.g. " + found[0].detail,
                any(s.discrete_only for s in found),
            )
    return EquivalenceReport(classes, certificates, separations, up_to_iso)


def _class_invariants(g, ci):
    """Isomorphism-invariant forms of the skeleton and the implied CI set."""
    vs = list(g.vertices)
    sk = skeleton(g)
    best_sk = best_ci = None
    for p in permutations(range(len(vs))):
        m = {v: p[i] for i, v in enumerate(vs)}
        e = tuple(sorted(tuple(sorted(m[v] for v in pair)) for pair in sk.edges))
        c = tuple(sorted(_ci_code(s, m) for s in ci))
        best_sk = e if best_sk is None or e < best_sk else best_sk
        best_ci = c if best_ci is None or c < best_ci else best_ci
    return best_sk, best_ci


def _ci_code(s, m):
    a = tuple(sorted(m[v] for v in s.a))
    b = tuple(sorted(m[v] for v in s.b))
    c = tuple(sorted(m[v] for v in s.c))
    return (min(a, b), max(a, b), c)
