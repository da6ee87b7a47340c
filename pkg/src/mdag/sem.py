"""Finite discrete structural equation models: exact joints, CI gaps,
kernel-program gaps and heuristic extremal searches."""

import io
from dataclasses import dataclass
from string import ascii_letters

import numpy as np

from .errors import DegenerateInputError, InputError, ParseError, ResourceError
from .graph import Dag, as_mdag
from .markov import CiStatement, kernel_arguments
from .projection import LabelledCanonicalDag, canonical_dag

#: Largest full state space exact_joint will sum over.
DEFAULT_STATE_CAP = 2 ** 24

_ROW_TOL = 1e-12


class DiscreteSem:
    """CPTs on a DAG.  ``kernels[v]`` has axes ``(*sorted(parents), v)``."""

    def __init__(self, dag, cardinalities, kernels):
        if isinstance(dag, LabelledCanonicalDag):
            dag = dag.dag
        if not isinstance(dag, Dag):
            raise InputError("DiscreteSem needs a Dag")
        self.dag = dag
        self.cardinalities = {v: int(cardinalities[v]) for v in dag.vertices}
        self.kernels = {}
        for v in dag.vertices:
            if self.cardinalities[v] < 1:
                raise InputError(f"cardinality of {v!r} must be positive")
            k = np.asarray(kernels[v], dtype=float)
            shape = tuple(self.cardinalities[p] for p in self.parent_order(v)) + (self.cardinalities[v],)
            if k.shape != shape:
                raise InputError(f"kernel of {v!r} has shape {k.shape}, expected {shape}")
            if (k < 0).any() or not np.allclose(k.sum(axis=-1), 1.0, atol=_ROW_TOL, rtol=0):
                raise InputError(f"kernel rows of {v!r} must be non-negative and sum to 1")
            self.kernels[v] = k

    def parent_order(self, v):
        return tuple(sorted(self.dag.parents(v)))

    @property
    def vertices(self):
        return self.dag.vertices


def random_sem(dag, cards, seed):
    """Dirichlet(1) rows for every parent configuration, drawn in sorted
    vertex order from ``numpy.random.default_rng(seed)``."""
    if isinstance(dag, LabelledCanonicalDag):
        dag = dag.dag
    cards = _card_map(dag, cards)
    rng = np.random.default_rng(seed)
    kernels = {}
    for v in dag.vertices:
        shape = tuple(cards[p] for p in sorted(dag.parents(v)))
        rows = rng.dirichlet(np.ones(cards[v]), size=int(np.prod(shape, dtype=np.int64)))
        kernels[v] = rows.reshape(shape + (cards[v],))
    return DiscreteSem(dag, cards, kernels)


def _card_map(dag, cards):
    if isinstance(cards, int):
        cards = {v: cards for v in dag.vertices}
    out = {}
    for v in dag.vertices:
        if v not in cards:
            raise InputError(f"no cardinality for {v!r}")
        c = int(cards[v])
        if c < 1:
            raise InputError(f"cardinality of {v!r} must be positive")
        out[v] = c
    return out


@dataclass
class JointTable:
    vertices: tuple
    cardinalities: tuple
    table: np.ndarray

    def __post_init__(self):
        self.vertices = tuple(str(v) for v in self.vertices)
        self.cardinalities = tuple(int(c) for c in self.cardinalities)
        self.table = np.asarray(self.table, dtype=float).reshape(self.cardinalities)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex in joint table")
        if len(self.vertices) != len(self.cardinalities):
            raise InputError("one cardinality per vertex")
        if (self.table < 0).any():
            raise InputError("negative probability")
        if abs(self.table.sum() - 1.0) > 1e-9:
            raise InputError(f"total mass {self.table.sum()!r} is not 1")

    def axis(self, v):
        try:
            return self.vertices.index(v)
        except ValueError:
            raise InputError(f"vertex {v!r} not in joint table") from None

    def marginal(self, keep):
        keep = [v for v in self.vertices if v in set(keep)]
        drop = tuple(i for i, v in enumerate(self.vertices) if v not in keep)
        return JointTable(keep, [self.cardinalities[self.axis(v)] for v in keep], self.table.sum(axis=drop))

    def reorder(self, order):
        order = tuple(order)
        if sorted(order) != sorted(self.vertices):
            raise InputError("reorder must be a permutation of the table's vertices")
        perm = [self.axis(v) for v in order]
        return JointTable(order, [self.cardinalities[i] for i in perm], np.transpose(self.table, perm))

    # -- text format --------------------------------------------------------

    def dumps(self):
        buf = io.StringIO()
        buf.write("# joint-table v1\n")
        buf.write("vertices: " + " ".join(self.vertices) + "\n")
        buf.write("cards: " + " ".join(str(c) for c in self.cardinalities) + "\n")
        for p in self.table.reshape(-1):
            buf.write(repr(float(p)) + "\n")
        return buf.getvalue()

    @classmethod
    def loads(cls, text):
        vertices = cards = None
        values = []
        for lineno, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            if s.startswith("vertices:"):
                vertices = s.split(":", 1)[1].split()
            elif s.startswith("cards:"):
                try:
                    cards = [int(x) for x in s.split(":", 1)[1].split()]
                except ValueError:
                    raise ParseError("cardinalities must be integers", lineno, 1) from None
            else:
                try:
                    values.append(float(s))
                except ValueError:
                    raise ParseError(f"expected a probability, got {s!r}", lineno, 1) from None
        if vertices is None or cards is None:
            raise ParseError("missing vertices: or cards: header")
        if len(values) != int(np.prod(cards, dtype=np.int64)):
            raise ParseError(f"expected {int(np.prod(cards))} entries, got {len(values)}")
        return cls(vertices, cards, np.array(values))


def exact_joint(sem, observed, cap=DEFAULT_STATE_CAP):
    """Marginal of the SEM over ``observed`` (output axes in sorted order)."""
    dag = sem.dag
    observed = sorted(dag.check(observed))
    cards = sem.cardinalities
    full = 1
    for v in dag.vertices:
        full *= cards[v]
    if full > cap:
        raise ResourceError(f"state space of {full} entries exceeds the cap of {cap}")
    if len(dag.vertices) > len(ascii_letters):
        raise ResourceError("too many variables for exact summation")
    idx = {v: i for i, v in enumerate(dag.vertices)}
    operands = []
    for v in dag.vertices:
        operands.append(sem.kernels[v])
        operands.append([idx[p] for p in sem.parent_order(v)] + [idx[v]])
    # path search costs more than it saves on small tables
    out = np.einsum(*operands, [idx[v] for v in observed], optimize=full > 4096)
    return JointTable(observed, [cards[v] for v in observed], np.asarray(out, dtype=float))


def canonical_sem_joint(g, seed, observed_card=2, latent_card=3):
    """Exact observed joint of a random SEM on the canonical DAG of ``g``."""
    g = as_mdag(g)
    can = canonical_dag(g)
    cards = {v: (observed_card if v in can.observed else latent_card) for v in can.dag.vertices}
    return exact_joint(random_sem(can.dag, cards, seed), can.observed)


# -- gaps ---------------------------------------------------------------------


def ci_gap(t, s):
    """Sup-norm of ``P(a,b|c) - P(a|c)P(b|c)`` over cells with ``P(c) > 0``."""
    if not isinstance(s, CiStatement):
        s = CiStatement(*s)
    for v in s.a | s.b | s.c:
        t.axis(v)
    a, b, c = sorted(s.a), sorted(s.b), sorted(s.c)
    m = t.marginal(s.a | s.b | s.c).reorder(c + a + b)
    nc = int(np.prod([m.cardinalities[i] for i in range(len(c))], dtype=np.int64))
    na = int(np.prod([m.cardinalities[len(c) + i] for i in range(len(a))], dtype=np.int64))
    p = m.table.reshape(nc, na, -1)
    pc = p.sum(axis=(1, 2))
    pos = pc > 0
    if not pos.any():
        return 0.0
    p, pc = p[pos], pc[pos]
    cond = p / pc[:, None, None]
    pa = cond.sum(axis=2)
    pb = cond.sum(axis=1)
    return float(np.abs(cond - pa[:, :, None] * pb[:, None, :]).max())


def verma_gap(t):
    """Largest change across ``x1`` of ``sum_x2 p(x2|x1) p(x4|x1,x2,x3)`` for
    a four-variable table on vertices ``1,2,3,4`` (in that axis order)."""
    if len(t.vertices) != 4:
        raise InputError("verma_gap needs a joint over exactly four variables")
    p = t.table
    if not (p > 0).all():
        raise DegenerateInputError("verma_gap requires a strictly positive joint")
    p12 = p.sum(axis=(2, 3))
    p1 = p12.sum(axis=1)
    p123 = p.sum(axis=3)
    q = np.einsum("ab,abcd->acd", p12 / p1[:, None], p / p123[..., None])
    return float((q.max(axis=0) - q.min(axis=0)).max())


def evaluate_program(t, program):
    """Apply a kernel program to ``t`` and return ``(array, arguments)``;
    the array keeps one (possibly length-one) axis per table vertex."""
    k = t.table
    random = list(t.vertices)
    for step in program:
        if step[0] == "marginalize":
            axes = tuple(t.axis(v) for v in step[1])
            k = k.sum(axis=axes, keepdims=True)
            random = [v for v in random if v not in step[1]]
        elif step[0] == "district":
            _, s, order = step
            if sorted(order) != sorted(random):
                raise InputError("district step order must list the current random vertices")
            q = np.ones((1,) * k.ndim)
            for i, v in enumerate(order):
                later = tuple(t.axis(w) for w in order[i + 1:])
                num = k.sum(axis=later, keepdims=True) if later else k
                if v not in s:
                    continue
                den = num.sum(axis=t.axis(v), keepdims=True)
                if not (den > 0).all():
                    raise DegenerateInputError(f"zero-probability cell while conditioning {v!r}")
                q = q * (num / den)
            k = q
            random = [v for v in order if v in s]
        else:
            raise InputError(f"unknown kernel step {step[0]!r}")
    return k, kernel_arguments(t.vertices, program)


def program_gap(t, program, free):
    """Sup over the other arguments of the range of the kernel across ``free``."""
    k, args = evaluate_program(t, program)
    if not free:
        return 0.0
    shape = tuple(t.cardinalities[i] if v in args else 1 for i, v in enumerate(t.vertices))
    k = np.broadcast_to(k, shape)
    axes = tuple(t.axis(v) for v in free)
    return float((k.max(axis=axes) - k.min(axis=axes)).max())


def constraint_gap(t, c):
    """Numeric deviation of ``t`` from a :class:`~mdag.markov.VermaConstraint`."""
    return program_gap(t, c.program, c.free)


# -- heuristic searches -------------------------------------------------------


@dataclass
class SearchResult:
    """Best point of a heuristic search; ``value`` is a lower bound only."""

    value: float
    margin_error: float
    sem: DiscreteSem
    heuristic: bool = True


def _candidates(old, rng):
    m = old.shape[-1]
    out = [np.eye(m)[i] for i in range(m)]
    out.append(np.full(m, 1.0 / m))
    out.append(rng.dirichlet(np.ones(m)))
    local = np.clip(old + rng.normal(0, 0.05, m), 0, None) + 1e-12
    out.append(local / local.sum())
    return out


def hill_climb(dag, cards, observed, objective, restarts, steps, seed, target=None, cap=DEFAULT_STATE_CAP):
    """Random-restart coordinate ascent over CPT rows.

    Odd restarts start from uniform sources with deterministic functions
    elsewhere.  Each step picks a random row and keeps the best of a few replacements
    (every one-hot row, the uniform row, a fresh Dirichlet draw and a small
    perturbation).  ``objective`` maps a JointTable over ``observed`` to a
    float.  Stops early once ``target`` is exceeded.  Returns
    ``(score, sem)`` of the best point found.
    """
    if restarts < 1:
        raise InputError("budget must be at least 1")
    rng = np.random.default_rng(seed)
    best = (-np.inf, None)
    for attempt in range(restarts):
        sem = random_sem(dag, cards, int(rng.integers(2 ** 32)))
        if attempt % 2:
            _make_functional(sem, rng)
        rows = [(v, r) for v in sem.vertices for r in np.ndindex(sem.kernels[v].shape[:-1])]
        score = objective(exact_joint(sem, observed, cap))
        for _ in range(steps):
            v, r = rows[int(rng.integers(len(rows)))]
            k = sem.kernels[v]
            keep = (score, k[r].copy())
            for cand in _candidates(keep[1], rng):
                k[r] = cand
                val = objective(exact_joint(sem, observed, cap))
                if val > keep[0] + 1e-15:
                    keep = (val, cand)
            k[r] = keep[1]
            score = keep[0]
            if target is not None and score > target:
                break
        if score > best[0]:
            best = (score, DiscreteSem(sem.dag, sem.cardinalities, {v: k.copy() for v, k in sem.kernels.items()}))
        if target is not None and best[0] > target:
            break
    return best


def _make_functional(sem, rng):
    """Uniform rows for parentless vertices, random one-hot rows elsewhere."""
    for v, k in sem.kernels.items():
        m = k.shape[-1]
        if k.ndim == 1:
            k[...] = 1.0 / m
        else:
            k[...] = np.eye(m)[rng.integers(m, size=k.shape[:-1])]


def _agreement(p):
    n = p.ndim
    agree = p[(1,) * n] + p[(0,) * n]
    err = 0.0
    for i in range(n):
        m = p.sum(axis=tuple(j for j in range(n) if j != i))
        err += abs(m[1] - 0.5)
    return float(agree), float(err)


def max_agreement_search(g, cards=2, latent_card=2, budget=200, seed=0, steps=60, penalty=4.0, cap=DEFAULT_STATE_CAP):
    """Search the canonical DAG of ``g`` for a large ``P(all observed equal)``
    with uniform observed margins (enforced by a penalty).

    ``budget`` restarts of ``steps`` row updates each.  The returned value is
    whatever was found; it proves nothing about what is unattainable.
    """
    if budget < 1:
        raise InputError("budget must be at least 1")
    g = as_mdag(g)
    can = canonical_dag(g)
    observed = sorted(can.observed)
    card = {}
    for v in can.dag.vertices:
        if v in can.observed:
            card[v] = cards[v] if isinstance(cards, dict) else cards
            if card[v] != 2:
                raise InputError("agreement search needs binary observed variables")
        else:
            card[v] = latent_card

    def objective(t):
        a, e = _agreement(t.table)
        return a - penalty * e

    _, sem = hill_climb(can.dag, card, observed, objective, budget, steps, seed, cap=cap)
    agree, err = _agreement(exact_joint(sem, observed, cap).table)
    return SearchResult(agree, err, sem)


def instrumental_bound(t, z, x, y):
    """``max_x sum_y max_z P(x, y | z)``; at most 1 whenever ``z`` is a valid
    instrument for the effect of ``x`` on ``y``."""
    m = t.marginal({z, x, y}).reorder((z, x, y)).table
    pz = m.sum(axis=(1, 2))
    if not (pz > 0).all():
        raise DegenerateInputError("instrument value with zero probability")
    cond = m / pz[:, None, None]
    return float(cond.max(axis=0).sum(axis=1).max())


def instrumental_violation_search(g, z, x, y, card=3, latent_card=3, restarts=20, steps=80, seed=0):
    """Look for a distribution in the model of ``g`` breaking the
    instrumental inequality for ``(z, x, y)``.  Returns ``(bound, sem)``
    with ``bound > 1`` on success; failure proves nothing."""
    g = as_mdag(g)
    can = canonical_dag(g)
    cards = {v: (card if v in can.observed else latent_card) for v in can.dag.vertices}

    def objective(t):
        try:
            return instrumental_bound(t, z, x, y)
        except DegenerateInputError:
            return -np.inf

    return hill_climb(can.dag, cards, sorted(can.observed), objective, restarts, steps, seed, target=1 + 1e-6)
