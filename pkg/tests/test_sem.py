from itertools import product

import numpy as np
import pytest

from mdag import (
    Dag,
    DegenerateInputError,
    InputError,
    JointTable,
    MDag,
    ParseError,
    ResourceError,
    canonical_dag,
    ci_gap,
    constraint_gap,
    exact_joint,
    implied_ci,
    max_agreement_search,
    random_sem,
    verma_constraints,
    verma_gap,
)
from mdag.sem import DiscreteSem, canonical_sem_joint, instrumental_bound, instrumental_violation_search

from conftest import load


def brute_joint(sem, observed):
    """Sum the product of CPT entries over every full assignment."""
    vs = list(sem.vertices)
    observed = sorted(observed)
    out = np.zeros([sem.cardinalities[v] for v in observed])
    for states in product(*[range(sem.cardinalities[v]) for v in vs]):
        x = dict(zip(vs, states))
        p = 1.0
        for v in vs:
            p *= sem.kernels[v][tuple(x[u] for u in sem.parent_order(v)) + (x[v],)]
        out[tuple(x[v] for v in observed)] += p
    return out


def brute_verma_gap(p):
    vals = []
    for x3, x4 in product(range(p.shape[2]), range(p.shape[3])):
        qs = []
        for x1 in range(p.shape[0]):
            q = 0.0
            for x2 in range(p.shape[1]):
                p2_1 = p[x1, x2].sum() / p[x1].sum()
                p4_123 = p[x1, x2, x3, x4] / p[x1, x2, x3].sum()
                q += p2_1 * p4_123
            qs.append(q)
        vals.append(max(qs) - min(qs))
    return max(vals)


def test_exact_joint_matches_brute_force():
    d = canonical_dag(load("fig_mdag.txt").graph).dag
    sem = random_sem(d, {v: (3 if v.startswith("@") else 2) for v in d.vertices}, seed=4)
    for obs in (["a", "b", "c", "d", "e", "f"], ["e", "f"], ["b"]):
        t = exact_joint(sem, obs)
        assert t.vertices == tuple(sorted(obs))
        assert np.allclose(t.table, brute_joint(sem, obs), atol=1e-13)


def test_random_sem_is_reproducible():
    d = Dag("ab", [("a", "b")])
    s1, s2 = random_sem(d, 3, seed=9), random_sem(d, 3, seed=9)
    assert all(np.array_equal(s1.kernels[v], s2.kernels[v]) for v in d.vertices)
    assert s1.kernels["b"].shape == (3, 3)
    assert not np.array_equal(random_sem(d, 3, seed=10).kernels["a"], s1.kernels["a"])


def test_bad_kernels_rejected():
    d = Dag("ab", [("a", "b")])
    with pytest.raises(InputError):
        DiscreteSem(d, {"a": 2, "b": 2}, {"a": [0.5, 0.5], "b": [0.5, 0.5]})
    with pytest.raises(InputError):
        DiscreteSem(d, {"a": 2, "b": 2}, {"a": [0.7, 0.7], "b": [[1, 0], [0, 1]]})
    with pytest.raises(InputError):
        random_sem(d, {"a": 2}, seed=0)


def test_state_cap():
    d = Dag([str(i) for i in range(6)])
    with pytest.raises(ResourceError):
        exact_joint(random_sem(d, 10, seed=0), d.vertices, cap=1000)


def test_joint_table_roundtrip_and_marginals():
    t = canonical_sem_joint(load("fig_verma_mdag.txt").graph, seed=2)
    back = JointTable.loads(t.dumps())
    assert back.vertices == t.vertices and np.array_equal(back.table, t.table)
    m = t.marginal({"1", "3"})
    assert m.vertices == ("1", "3")
    assert np.allclose(m.table, t.table.sum(axis=(1, 3)))
    r = t.reorder(["4", "3", "2", "1"])
    assert np.array_equal(r.table, np.transpose(t.table, [3, 2, 1, 0]))


@pytest.mark.parametrize(
    "text",
    [
        "vertices: a\n0.5\n0.5\n",
        "vertices: a\ncards: x\n",
        "vertices: a\ncards: 2\n0.5\n",
        "vertices: a\ncards: 2\n0.5\nhalf\n",
    ],
)
def test_joint_table_parse_errors(text):
    with pytest.raises(ParseError):
        JointTable.loads(text)


def test_joint_table_validation():
    with pytest.raises(InputError):
        JointTable(["a"], [2], [0.6, 0.6])
    with pytest.raises(InputError):
        JointTable(["a", "a"], [1, 1], [1.0])
    with pytest.raises(InputError):
        JointTable(["a"], [2], [1.2, -0.2])


def test_ci_gap_zero_exactly_where_implied():
    g = load("fig_verma_mdag.txt").graph
    t = canonical_sem_joint(g, seed=0)
    (s,) = implied_ci(g)
    assert ci_gap(t, s) < 1e-12
    assert ci_gap(t, ({"1"}, {"2"}, set())) > 1e-4


def test_verma_gap_matches_loops():
    g = load("fig_verma_mdag.txt").graph
    for seed in range(3):
        t = canonical_sem_joint(g, seed)
        assert verma_gap(t) < 1e-12
        full = exact_joint(random_sem(Dag("1234", [(a, b) for a in "1234" for b in "1234" if a < b]), 2, seed), list("1234"))
        assert verma_gap(full) == pytest.approx(brute_verma_gap(full.table), abs=1e-14)


def test_verma_gap_needs_positive_four_way_table():
    with pytest.raises(InputError):
        verma_gap(JointTable(["a"], [1], [1.0]))
    p = np.zeros((2, 2, 2, 2))
    p[0, 0, 0, 0] = 1.0
    with pytest.raises(DegenerateInputError):
        verma_gap(JointTable("1234", [2, 2, 2, 2], p))


def test_constraint_gap_agrees_with_verma_gap():
    g = load("fig_verma_mdag.txt").graph
    (c,) = verma_constraints(g)
    dag = Dag("1234", [(a, b) for a in "1234" for b in "1234" if a < b])
    t = exact_joint(random_sem(dag, 2, seed=1), list("1234"))
    assert constraint_gap(t, c) == pytest.approx(verma_gap(t), rel=1e-9)
    assert constraint_gap(canonical_sem_joint(g, 5), c) < 1e-12


def test_agreement_search():
    sat = max_agreement_search(load("fig_saturated.txt").graph, seed=0)
    tri = max_agreement_search(load("fig_triangle.txt").graph, seed=0)
    assert sat.value >= 1 - 1e-6 and sat.heuristic
    assert tri.value < 1.0


def test_instrumental_bound_and_search():
    uc = MDag("zxy", [("z", "x"), ("z", "y")], [{"x", "z"}, {"y", "z"}])
    iv = MDag("zxy", [("z", "x"), ("x", "y")], [{"x", "y"}])
    bound_uc, sem_uc = instrumental_violation_search(uc, "z", "x", "y", seed=0)
    bound_iv, _ = instrumental_violation_search(iv, "z", "x", "y", seed=0)
    assert bound_uc > 1.0 + 1e-3
    assert bound_iv <= 1.0 + 1e-9
    t = exact_joint(sem_uc, ["x", "y", "z"])
    assert instrumental_bound(t, "z", "x", "y") == pytest.approx(bound_uc)
