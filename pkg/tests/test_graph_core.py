import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdag import CycleError, Dag, InputError, MDag, VertexPartition
from mdag.graph import ancestors, induced_subgraph, is_ancestral, is_subgraph

from oracles import descendants, naive_acyclic


@st.composite
def dags(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    names = [f"x{i}" for i in range(n)]
    perm = draw(st.permutations(names))
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Dag(names, chosen)


def test_vertices_are_sorted_strings():
    d = Dag([3, 1, 2], [(1, 2)])
    assert d.vertices == ("1", "2", "3")
    assert d.edges == {("1", "2")}


def test_cycle_is_reported_with_a_witness():
    with pytest.raises(CycleError) as info:
        Dag("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    cyc = info.value.cycle
    assert set(cyc) >= {"a", "b", "c"}


def test_self_loop_and_unknown_vertex_rejected():
    with pytest.raises(InputError):
        Dag("ab", [("a", "a")])
    with pytest.raises(InputError):
        Dag("ab", [("a", "z")])


def test_from_edges_adds_endpoints():
    d = Dag.from_edges([("p", "q")], vertices=["r"])
    assert d.vertices == ("p", "q", "r")


def test_parents_children_and_ancestry():
    d = Dag("1234", [("1", "2"), ("2", "3"), ("4", "3")])
    assert d.parents("3") == {"2", "4"}
    assert d.children({"1", "2"}) == {"2", "3"}
    assert d.ancestors("3") == {"1", "2", "3", "4"}
    assert d.descendants("1") == {"1", "2", "3"}
    assert d.is_ancestral({"1", "2"})
    assert not d.is_ancestral({"3"})
    assert ancestors(d, {"2"}) == {"1", "2"}
    assert is_ancestral(d, {"4"})


def test_topological_order_respects_edges():
    d = Dag("abcd", [("d", "a"), ("a", "b"), ("c", "b")])
    order = d.topological_order()
    pos = {v: i for i, v in enumerate(order)}
    assert all(pos[a] < pos[b] for a, b in d.edges)
    assert order == ("c", "d", "a", "b")


def test_mdag_equality_uses_facets():
    g = MDag("abc", [("a", "b")], [{"a", "b"}, {"a"}])
    h = MDag("abc", [("a", "b")], [{"b", "a"}])
    assert g == h and hash(g) == hash(h)
    assert g != MDag("abc", [("a", "b")])
    assert g.facets == (frozenset("ab"), frozenset("c"))


def test_face_outside_vertex_set_rejected():
    with pytest.raises(InputError):
        MDag("ab", [], [{"a", "z"}])


def test_induced_subgraph_restricts_faces():
    g = MDag("abcd", [("a", "b"), ("c", "d")], [{"a", "b", "c"}])
    h = induced_subgraph(g, {"a", "c", "d"})
    assert h == MDag("acd", [("c", "d")], [{"a", "c"}])
    assert is_subgraph(h, g)
    assert not is_subgraph(g, h)


def test_subgraph_needs_face_containment():
    a = MDag("123", [("1", "2")], [{"1", "2", "3"}])
    b = MDag("123", [("1", "2")], [{"1", "2"}, {"1", "3"}, {"2", "3"}])
    assert not is_subgraph(a, b)
    assert is_subgraph(b, a)
    assert is_subgraph(a, a)
    assert is_subgraph(MDag("123"), b)


def test_vertex_partition():
    p = VertexPartition(list("abc"), [{"a", "b"}, {"c"}])
    assert p.block_of("b") == {"a", "b"}
    assert len(p) == 2
    with pytest.raises(InputError):
        VertexPartition(list("abc"), [{"a", "b"}])
    with pytest.raises(InputError):
        VertexPartition(list("abc"), [{"a", "b"}, {"b", "c"}])


@settings(max_examples=150, deadline=None)
@given(dags())
def test_ancestry_matches_reachability(d):
    for v in d.vertices:
        assert d.descendants(v) == descendants(d.edges, v)
        assert d.ancestors(v) == {u for u in d.vertices if v in descendants(d.edges, u)}


@settings(max_examples=100, deadline=None)
@given(dags(), st.data())
def test_acyclicity_matches_oracle(d, data):
    if len(d.vertices) < 2:
        return
    a, b = data.draw(st.permutations(d.vertices))[:2]
    edges = set(d.edges) | {(a, b)}
    expect = naive_acyclic(d.vertices, edges)
    try:
        Dag(d.vertices, edges)
        got = True
    except CycleError:
        got = False
    assert got == expect


@settings(max_examples=100, deadline=None)
@given(dags())
def test_relabel_roundtrip(d):
    fwd = {v: "n" + v for v in d.vertices}
    back = {b: a for a, b in fwd.items()}
    assert d.relabel(fwd).relabel(back) == d
