import json
import random

import pytest
from hypothesis import given, strategies as st

from diskpack.graph import (Graph, GraphError, RotationError, RotationSystem, caterpillar_from_degrees,
                            caterpillar_view, check_rotation_system, classify, graph_from_json,
                            graph_to_json, is_internally_triangulated_outerplane, load_graph,
                            path_graph, star_view, trace_faces)

K3 = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
K3_ROT = RotationSystem({"a": "bc", "b": "ca", "c": "ab"}, "abc")


def test_graph_invariants():
    with pytest.raises(GraphError):
        Graph("ab", [("a", "a")])
    with pytest.raises(GraphError):
        Graph("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(GraphError):
        Graph("ab", [("a", "z")])
    with pytest.raises(GraphError):
        Graph("ab", [("a", "b")], {"a": 1.0})
    with pytest.raises(GraphError):
        Graph("ab", [("a", "b")], {"a": 1.0, "b": 0.0})


def test_classify_path_is_caterpillar():
    g = Graph("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    cl = classify(g)
    assert cl.kind == "Caterpillar"
    assert cl.caterpillar.inner_path in (("b", "c"), ("c", "b"))
    assert set(cl.caterpillar.leaves["b"]) == {"a"} and set(cl.caterpillar.leaves["c"]) == {"d"}


def test_classify_star_and_cycle():
    k14 = Graph("cwxyz", [("c", v) for v in "wxyz"])
    cl = classify(k14)
    assert cl.kind == "Star" and len(cl.star.leaf_order) == 4 and cl.star.center == "c"
    c4 = Graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    assert classify(c4).kind == "Other"


def test_classify_degenerate():
    assert classify(Graph("a", [])).star.leaf_order == ()
    one = classify(Graph("ab", [("a", "b")]))
    assert one.kind == "Star" and len(one.star.leaf_order) == 1
    with pytest.raises(GraphError):
        classify(Graph("ab", []))
    with pytest.raises(GraphError):
        classify(Graph([], []))


def test_non_caterpillar_tree():
    # spider with three legs of length 2
    g = Graph("cabdefg", [("c", "a"), ("a", "b"), ("c", "d"), ("d", "e"), ("c", "f"), ("f", "g")])
    assert classify(g).kind == "Other"


def test_itop_examples():
    assert is_internally_triangulated_outerplane(K3, K3_ROT)
    c4 = Graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    rs = RotationSystem({"a": "bd", "b": "ca", "c": "db", "d": "ac"}, "abcd")
    assert check_rotation_system(c4, rs).ok
    assert not is_internally_triangulated_outerplane(c4, rs)
    diamond, drs = two_triangles()
    assert is_internally_triangulated_outerplane(diamond, drs)


def two_triangles():
    # a=(0,0), b=(2,0), c=(1,1.7), d=(1,-1.7); shared edge a-b
    g = Graph("abcd", [("a", "b"), ("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")])
    rs = RotationSystem({"a": "dbc", "b": "cad", "c": "ab", "d": "ba"}, "adbc")
    return g, rs


def test_face_tracing_orientation():
    g, rs = two_triangles()
    faces = trace_faces(g, rs)
    assert sorted(len(f) for f in faces) == [3, 3, 4]


def test_k4_genus_one_reported():
    k4 = Graph("abcd", [(u, v) for i, u in enumerate("abcd") for v in "abcd"[i + 1:]])
    planar = RotationSystem({"a": "bcd", "b": "adc", "c": "abd", "d": "acb"})
    assert check_rotation_system(k4, planar).ok
    toroidal = RotationSystem({"a": "bcd", "b": "acd", "c": "abd", "d": "abc"})
    res = check_rotation_system(k4, toroidal)
    assert not res.ok and res.genus == 1


def test_rotation_missing_neighbour_errors():
    with pytest.raises(RotationError):
        check_rotation_system(K3, RotationSystem({"a": "b", "b": "ca", "c": "ab"}))
    with pytest.raises(RotationError):
        check_rotation_system(K3, RotationSystem({"a": "bc", "b": "ca"}))


def test_outer_face_must_use_edges():
    g, _ = two_triangles()
    with pytest.raises(RotationError):
        check_rotation_system(g, RotationSystem({"a": "dbc", "b": "cad", "c": "ab", "d": "ba"}, "acdb"))


def test_embedded_star_view_uses_rotation():
    g = Graph("cxyz", [("c", v) for v in "xyz"], {"c": 1, "x": 1, "y": 2, "z": 3})
    s = star_view(g, RotationSystem({"c": "zxy", "x": "c", "y": "c", "z": "c"}), embedded=True)
    assert [v for v, _ in s.leaf_order] == ["z", "x", "y"]
    assert s.radii == [3.0, 1.0, 2.0]
    with pytest.raises(RotationError):
        star_view(g, None, embedded=True)


def test_json_round_trip(tmp_path):
    g, rs = two_triangles()
    data = graph_to_json(g, rs)
    g2, rs2 = graph_from_json(json.loads(json.dumps(data)))
    assert g2.same_as(g) and rs2.order == rs.order and rs2.outer_face == rs.outer_face
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": ["a",\n "b"],, }')
    with pytest.raises(GraphError, match="line 2"):
        load_graph(bad)
    with pytest.raises(GraphError, match="edges\\[0\\]"):
        graph_from_json({"vertices": ["a"], "edges": [["a"]]})


def random_caterpillar(rng, k_max=12):
    degs = []
    k = rng.randint(1, k_max)
    for i in range(k):
        lo = (i > 0) + (i < k - 1)
        degs.append(rng.randint(max(lo, 1), 6))
    return caterpillar_from_degrees(degs)


@given(st.integers(0, 10 ** 6))
def test_caterpillar_round_trip_and_relabel(seed):
    rng = random.Random(seed)
    c = random_caterpillar(rng)
    view = caterpillar_view(c.graph)
    assert view is not None
    assert view.rebuild().same_as(c.graph)
    # relabeling: same degree sequence on the inner path, up to reversal
    perm = list(c.graph.vertices)
    rng.shuffle(perm)
    ren = dict(zip(c.graph.vertices, (f"q{i}" for i in range(len(perm)))))
    ren = {v: ren[p] for v, p in zip(c.graph.vertices, perm)}
    g2 = Graph([ren[v] for v in c.graph.vertices], [(ren[u], ren[v]) for u, v in c.graph.edges])
    assert classify(g2).kind == classify(c.graph).kind
    v2 = caterpillar_view(g2)
    d1, d2 = view.degrees(), v2.degrees()
    assert d2 in (d1, d1[::-1])


@given(st.integers(0, 10 ** 6), st.integers(3, 30))
def test_euler_on_generated_embeddings(seed, n):
    from diskpack.rigidity import triangle_strip_graph
    g, rs = triangle_strip_graph(n, random.Random(seed))
    res = check_rotation_system(g, rs)
    assert res.ok
    V, E = len(g.vertices), len(g.edges)
    assert V - E + res.faces == 2
    assert is_internally_triangulated_outerplane(g, rs)


def test_path_graph_is_caterpillar():
    assert classify(path_graph(5)).kind == "Caterpillar"
