from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdag import InputError, SimplicialComplex
from mdag.simplicial import contains, from_generators, maximalize, remove_vertices

GROUND = "abcde"


@st.composite
def complexes(draw):
    gens = draw(st.lists(st.sets(st.sampled_from(GROUND), min_size=1, max_size=4), max_size=5))
    return from_generators(GROUND, gens)


def test_singletons_fill_in():
    c = from_generators("abc", [{"a", "b"}])
    assert c.facets == (frozenset("ab"), frozenset("c"))
    assert c.nontrivial_facets == (frozenset("ab"),)


def test_trivial_complex():
    c = SimplicialComplex.trivial("xyz")
    assert len(c.facets) == 3 and not c.nontrivial_facets


def test_generators_are_maximalized():
    c = from_generators("abcd", [{"a", "b", "c"}, {"a", "b"}, {"c", "d"}, {"d"}])
    assert set(c.facets) == {frozenset("abc"), frozenset("cd")}


def test_bad_generators():
    with pytest.raises(InputError):
        from_generators("ab", [set()])
    with pytest.raises(InputError):
        from_generators("ab", [{"a", "q"}])


def test_contains_is_downward_closed():
    c = from_generators("abcd", [{"a", "b", "c"}])
    assert contains(c, {"a", "c"}) and {"b"} in c
    assert not contains(c, {"a", "d"})
    with pytest.raises(InputError):
        contains(c, set())


def test_remove_vertices_keeps_ground_and_adds_singletons():
    c = from_generators("abcdef", [{"a", "c"}, {"c", "d", "e"}, {"d", "e", "f"}])
    r = remove_vertices(c, {"d"})
    assert set(r.nontrivial_facets) == {frozenset("ac"), frozenset("ce"), frozenset("ef")}
    assert frozenset("b") in r.facets and frozenset("d") in r.facets
    assert r.ground_set == c.ground_set


def test_restrict():
    c = from_generators("abcd", [{"a", "b", "c"}, {"c", "d"}])
    r = c.restrict({"a", "c", "d"})
    assert r.ground_set == frozenset("acd")
    assert set(r.facets) == {frozenset("ac"), frozenset("cd")}


def test_maximalize():
    assert maximalize([{"a"}, {"a", "b"}, {"a", "b"}, set()]) == [frozenset("ab")]


@settings(max_examples=200, deadline=None)
@given(complexes())
def test_faces_are_downward_closed_and_match_facets(c):
    faces = set(c.faces())
    for f in faces:
        for k in range(1, len(f)):
            assert all(frozenset(s) in faces for s in combinations(f, k))
    maximal = {f for f in faces if not any(f < g for g in faces)}
    assert maximal == set(c.facets)
    assert all(frozenset([v]) in faces for v in GROUND)


@settings(max_examples=200, deadline=None)
@given(complexes(), st.sets(st.sampled_from(GROUND)))
def test_removal_matches_face_wise_definition(c, a):
    expect = {f - a for f in c.faces() if f - a} | {frozenset([v]) for v in a}
    assert set(remove_vertices(c, a).faces()) == expect


@settings(max_examples=100, deadline=None)
@given(complexes(), complexes())
def test_subcomplex_matches_face_sets(c, d):
    assert c.is_subcomplex(d) == (set(c.faces()) <= set(d.faces()))
