import pytest

from mdag import InputError, MDag, ResourceError, canonical_iso_form, enumerate_mdags, equivalence_classes, facet_split, iter_mdags, skeleton
from mdag.equivalence import FacetSplitError, Skeleton, labelled_dags, legal_splits, simplicial_complexes

from conftest import load
from oracles import all_complexes, all_dags, canonical_form


def names(n):
    return [str(i) for i in range(1, n + 1)]


@pytest.mark.parametrize("n, expect", [(1, 1), (2, 3), (3, 25), (4, 543)])
def test_dag_counts(n, expect):
    assert len(all_dags(names(n))) == expect
    assert {frozenset(d.edges) for d in labelled_dags(n)} == set(all_dags(names(n)))


@pytest.mark.parametrize("n, expect", [(1, 1), (2, 2), (3, 9), (4, 114)])
def test_complex_counts(n, expect):
    got = {frozenset(f for f in c.faces() if len(f) > 1) for c in simplicial_complexes(n)}
    assert len(simplicial_complexes(n)) == expect
    assert got == set(all_complexes(names(n)))


def test_labelled_three_vertex_count():
    assert len(enumerate_mdags(3)) == 225 == 25 * 9


def test_unlabelled_count_matches_orbit_oracle():
    forms = {canonical_form(g.vertices, g.edges, g.facets) for g in enumerate_mdags(3)}
    assert len(enumerate_mdags(3, up_to_iso=True)) == len(forms)
    forms2 = {canonical_form(g.vertices, g.edges, g.facets) for g in enumerate_mdags(2)}
    assert len(enumerate_mdags(2, up_to_iso=True)) == len(forms2) == 4


def test_iterator_matches_list_and_threads_do_not_change_order():
    assert list(iter_mdags(3, True)) == enumerate_mdags(3, True)
    assert enumerate_mdags(3, True, threads=4) == enumerate_mdags(3, True)


def test_enumeration_caps():
    with pytest.raises(ResourceError):
        enumerate_mdags(5)
    with pytest.raises(InputError):
        list(iter_mdags(-1))


def test_canonical_iso_form():
    a = MDag("xyz", [("x", "y")], [{"y", "z"}])
    b = MDag("xyz", [("z", "x")], [{"x", "y"}])
    fa, fb = canonical_iso_form(a), canonical_iso_form(b)
    assert fa.key == fb.key and fa.graph == fb.graph
    assert a.relabel(fa.mapping) == fa.graph
    assert canonical_iso_form(MDag("xyz", [("x", "y")])).key != fa.key
    with pytest.raises(ResourceError):
        canonical_iso_form(MDag([str(i) for i in range(8)]))


def test_skeletons_of_the_iv_triple():
    sks = {skeleton(load(f"fig_iv_{x}.txt").graph) for x in "abc"}
    assert len(sks) == 1
    (sk,) = sks
    assert sk.sorted_edges() == [("1", "2"), ("2", "3")]
    with pytest.raises(InputError):
        Skeleton(frozenset("ab"), frozenset([frozenset("ac")]))


def test_facet_split_goldens():
    assert facet_split(load("fig_iv_c.txt").graph, {"1", "2"}, {"1"}) == load("fig_iv_a.txt").graph
    assert facet_split(load("fig_split_a.txt").graph, set("abcd"), {"a", "b"}) == load("fig_split_b.txt").graph
    step = facet_split(load("fig_chain_0.txt").graph, {"1", "2", "3"}, {"1"})
    assert step == load("fig_chain_1.txt").graph
    assert facet_split(step, {"2", "3"}, {"2"}) == load("fig_chain_2.txt").graph


def test_facet_split_preconditions():
    g = load("fig_iv_c.txt").graph
    with pytest.raises(FacetSplitError) as info:
        facet_split(g, {"2", "3"}, {"2"})
    assert info.value.condition == "i"
    h = MDag("abc", [("c", "a")], [{"a", "b"}])
    with pytest.raises(FacetSplitError) as info:
        facet_split(h, {"a", "b"}, {"a"})
    assert info.value.condition == "ii"
    assert facet_split(h, {"a", "b"}, {"b"}).edges == {("c", "a"), ("b", "a")}
    with pytest.raises(InputError):
        facet_split(g, {"1", "3"}, {"1"})
    with pytest.raises(InputError):
        facet_split(g, {"1", "2"}, {"1", "2"})


def test_legal_splits_agree_with_facet_split():
    for g in enumerate_mdags(3):
        for b, c, res in legal_splits(g):
            assert facet_split(g, b, c) == res
        legal = {(b, c) for b, c, _ in legal_splits(g)}
        for b in g.nontrivial_facets:
            for v in b:
                c = frozenset([v])
                try:
                    facet_split(g, b, c)
                    ok = True
                except FacetSplitError:
                    ok = False
                assert ok == ((b, c) in legal)


def test_iv_triple_is_one_class_with_chains():
    gs = [load(f"fig_iv_{x}.txt").graph for x in "abc"]
    rep = equivalence_classes(gs)
    assert len(rep.classes) == 1 and len(rep.classes[0]) == 3
    assert set(rep.certificates) == {(0, 1), (0, 2)}
    assert all(rep.certificates[k] for k in rep.certificates)


def test_two_vertex_classification():
    rep = equivalence_classes(enumerate_mdags(2, True), up_to_iso=True)
    assert len(rep.classes) == 2 and not rep.undecided
    assert rep.separations[(0, 1)].kind == "skeleton"


def test_report_json_shape():
    rep = equivalence_classes(enumerate_mdags(2), up_to_iso=False)
    d = rep.to_dict()
    assert d["schema"] == "mdag.equivalence-report/1"
    assert len(d["classes"]) == len(rep.classes)


def test_saturated_vs_triangle_separated_by_ci_free_certificate():
    rep = equivalence_classes([load("fig_saturated.txt").graph, load("fig_triangle.txt").graph])
    assert len(rep.classes) == 2
    assert rep.separations[(0, 1)].kind != "undecided"


def test_mixed_sizes_rejected():
    with pytest.raises(InputError):
        equivalence_classes([MDag("a"), MDag("ab")])
    assert equivalence_classes([]).classes == []


def test_verma_certificate_separates_same_skeleton_and_ci():
    g = load("fig_verma_mdag.txt").graph
    h = MDag("1234", [("1", "2"), ("2", "3"), ("3", "4")], [{"2", "4"}, {"3", "4"}])
    assert skeleton(g) == skeleton(h)
    from mdag import implied_ci

    assert {s.normalized() for s in implied_ci(g)} == {s.normalized() for s in implied_ci(h)}
    rep = equivalence_classes([g, h])
    assert len(rep.classes) == 2
    sep = rep.separations[(0, 1)]
    assert sep.kind == "verma" and "independent of {1}" in sep.detail


@pytest.mark.slow
def test_four_vertex_classification_is_consistent():
    """The full 4-vertex run must finish without merging graphs that a
    certificate separates; undecided pairs are allowed."""
    graphs = enumerate_mdags(4, up_to_iso=True)
    assert len(graphs) == 2809
    rep = equivalence_classes(graphs, up_to_iso=True)
    assert sum(len(c) for c in rep.classes) == 2809
    assert 8 < len(rep.classes) < 2809
    n = len(rep.classes)
    assert len(rep.separations) == n * (n - 1) // 2
