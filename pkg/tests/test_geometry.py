import math
import random
import xml.etree.ElementTree as ET
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from diskpack.geometry import (Disk, GeometryError, OverlapError, Packing, Relation, ViolationKind,
                               disk_relation, extract_contact_graph, packing_from_centers,
                               render_svg, subtend_angle, tangent_point, validate_dcr)
from diskpack.graph import Graph, path_graph

DATA = Path(__file__).parent / "data"
S3 = math.sqrt(3)


def unit(id_, x, y):
    return Disk(id_, x, y, 1.0)


def k3_packing():
    return Packing((unit("a", 0, 0), unit("b", 2, 0), unit("c", 1, S3)))


K3 = Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])


@pytest.mark.parametrize("dist,rel", [(2, Relation.TANGENT), (3, Relation.DISJOINT),
                                      (1.5, Relation.OVERLAP)])
def test_disk_relation_examples(dist, rel):
    assert disk_relation(unit("a", 0, 0), unit("b", dist, 0), 1e-9) is rel


def test_tolerance_window_edges():
    a = unit("a", 0, 0)
    assert disk_relation(a, unit("b", 2 + 5e-10, 0)) is Relation.TANGENT
    assert disk_relation(a, unit("b", 2 + 5e-9, 0)) is Relation.DISJOINT
    assert disk_relation(a, unit("b", 2 - 5e-9, 0)) is Relation.OVERLAP


def test_degenerate_inputs_rejected():
    with pytest.raises(GeometryError):
        Disk("a", math.nan, 0, 1)
    with pytest.raises(GeometryError):
        Disk("a", 0, 0, 0)
    with pytest.raises(GeometryError):
        Disk("a", 0, math.inf, 1)


def test_packing_invariants():
    with pytest.raises(GeometryError):
        Packing((unit("a", 0, 0), unit("a", 5, 0)))
    with pytest.raises(GeometryError):
        Packing((unit("a", 0, 0),), tol=0.02)


def test_extract_contact_graph_examples():
    assert extract_contact_graph(k3_packing()).same_as(K3)
    far = extract_contact_graph(Packing((unit("a", 0, 0), unit("b", 5, 0))))
    assert far.edges == frozenset()
    chain = Packing(tuple(unit(f"v{i}", 2 * i, 0) for i in range(4)))
    assert extract_contact_graph(chain).same_as(path_graph(4))


def test_extract_contact_graph_overlap_error():
    with pytest.raises(OverlapError) as ei:
        extract_contact_graph(Packing((unit("a", 0, 0), unit("b", 1, 0))))
    assert set(ei.value.pair) == {"a", "b"}


def test_validate_dcr_examples():
    assert validate_dcr(k3_packing(), K3).valid
    p3 = Graph("abc", [("a", "b"), ("b", "c")])
    rep = validate_dcr(k3_packing(), p3)
    assert rep.kinds() == [ViolationKind.FORBIDDEN_CONTACT]
    assert not rep.valid and rep.verdict == "Invalid"


def test_validate_dcr_missing_contact_and_id_mismatch():
    p = Packing((unit("a", 0, 0), unit("b", 3, 0)))
    rep = validate_dcr(p, Graph("ab", [("a", "b")]))
    assert rep.kinds() == [ViolationKind.MISSING_CONTACT]
    with pytest.raises(GeometryError):
        validate_dcr(p, Graph("abc", []))


def weighted_star_123():
    """K_{1,3} with leaves of radius 1, 2, 3 around a unit center, spread apart."""
    radii = {"x": 1.0, "y": 2.0, "z": 3.0}
    used = subtend_angle(1, 1, 2) + subtend_angle(1, 2, 3) + subtend_angle(1, 3, 1)
    slack = (2 * math.pi - used) / 3
    disks = [Disk("c", 0, 0, 1)]
    t = 0.0
    order = ["x", "y", "z"]
    for i, v in enumerate(order):
        if i:
            t += subtend_angle(1, radii[order[i - 1]], radii[v]) + slack
        d = 1 + radii[v]
        disks.append(Disk(v, d * math.cos(t), d * math.sin(t), radii[v]))
    return Packing(tuple(disks)), Graph("cxyz", [("c", "x"), ("c", "y"), ("c", "z")])


def test_validate_weighted_star():
    p, g = weighted_star_123()
    # brute-force pairwise check, independent of the validator
    ds = p.disks
    for i in range(len(ds)):
        for j in range(i):
            gp = math.dist(ds[i].center, ds[j].center) - ds[i].r - ds[j].r
            assert (abs(gp) < 1e-12) == ("c" in (ds[i].id, ds[j].id))
    assert validate_dcr(p, g, {"c": 1, "x": 1, "y": 2, "z": 3}).valid
    assert validate_dcr(p, g, {"c": 2, "x": 2, "y": 4, "z": 6}).valid
    rep = validate_dcr(p, g, {"c": 1, "x": 1, "y": 2, "z": 4})
    assert rep.kinds() == [ViolationKind.RADIUS_MISMATCH]


def test_subtend_angle_examples():
    assert subtend_angle(1, 1, 1) == pytest.approx(math.pi / 3, abs=1e-15)
    assert subtend_angle(1, 1e-6, 1e-6) < 1e-5


def test_subtend_angle_matches_measured_tangent_configuration():
    R, r1, r2 = 1.0, 2.0, 3.0
    c1 = (R + r1, 0.0)
    # second center: distance R + r2 from origin and r1 + r2 from c1
    pts = tangent_point((0.0, 0.0), R + r2, c1, r1 + r2)
    ang = abs(math.atan2(pts[0][1], pts[0][0]))
    assert subtend_angle(R, r1, r2) == pytest.approx(ang, abs=1e-12)


def test_subtend_angle_impossible():
    with pytest.raises(GeometryError):
        subtend_angle(1, -1, 1)


def test_render_svg_single_disk():
    svg = render_svg(Packing((unit("a", 0, 0),)))
    root = ET.fromstring(svg)
    vb = [float(x) for x in root.attrib["viewBox"].split()]
    assert vb == pytest.approx([-1.1, -1.1, 2.2, 2.2])
    assert len(root.findall("{http://www.w3.org/2000/svg}circle")) == 1


def test_render_svg_empty_packing():
    root = ET.fromstring(render_svg(Packing(())))
    assert root.attrib["viewBox"].split() == ["0", "0", "1", "1"]
    assert root.findall("{http://www.w3.org/2000/svg}circle") == []


def test_render_svg_k3_golden():
    svg = render_svg(k3_packing(), labels=True)
    assert svg == (DATA / "k3.svg").read_text()
    root = ET.fromstring(svg)
    circles = root.findall("{http://www.w3.org/2000/svg}circle")
    assert len(circles) == 3
    pts = [(float(c.attrib["cx"]), float(c.attrib["cy"])) for c in circles]
    for i in range(3):
        for j in range(i):
            assert math.dist(pts[i], pts[j]) == pytest.approx(2.0, abs=1e-9)


def test_packing_json_round_trip(tmp_path):
    p = k3_packing()
    q = Packing.from_json(p.to_json())
    assert q == p
    with pytest.raises(ValueError, match="disks\\[0\\]"):
        Packing.from_json({"disks": [{"id": "a", "cx": 0}]})


coord = st.floats(-20, 20, allow_nan=False)


@given(coord, coord, st.floats(0.1, 5), coord, coord, st.floats(0.1, 5), st.floats(0, 1e-3))
def test_relation_symmetric(x1, y1, r1, x2, y2, r2, tol):
    a, b = Disk("a", x1, y1, r1), Disk("b", x2, y2, r2)
    assert disk_relation(a, b, tol) is disk_relation(b, a, tol)


def _exact_contact_edges(centers, tol):
    """O(n^2) contact test on rational coordinates (squared distances, no sqrt)."""
    ids = sorted(centers)
    edges = set()
    for i, u in enumerate(ids):
        for v in ids[i + 1:]:
            (x1, y1), (x2, y2) = centers[u], centers[v]
            d2 = (x1 - x2) ** 2 + (y1 - y2) ** 2
            lo, hi = (2 - tol) ** 2, (2 + tol) ** 2
            if d2 < lo:
                return None
            if d2 <= hi:
                edges.add((u, v))
    return edges


@given(st.integers(0, 10 ** 6), st.integers(2, 50))
def test_contact_graph_matches_exact_reference(seed, n):
    rng = random.Random(seed)
    tol = Fraction(1, 10 ** 9)
    centers = {}
    # lattice-ish placements produce many exact tangencies
    for k in range(n):
        if centers and rng.random() < 0.6:
            bx, by = centers[rng.choice(sorted(centers))]
            dx, dy = rng.choice([(2, 0), (-2, 0), (0, 2), (0, -2)])
            c = (bx + dx, by + dy)
        else:
            c = (Fraction(rng.randint(-400, 400), 10), Fraction(rng.randint(-400, 400), 10))
        if c not in centers.values():
            centers[f"d{k}"] = c
    ref = _exact_contact_edges(centers, tol)
    p = packing_from_centers({k: (float(x), float(y)) for k, (x, y) in centers.items()}, 1.0, float(tol))
    if ref is None:
        with pytest.raises(OverlapError):
            extract_contact_graph(p)
        return
    got = {tuple(sorted(e)) for e in extract_contact_graph(p).edges}
    assert got == ref


@given(st.integers(0, 10 ** 6))
def test_validate_monotone_in_tol(seed):
    rng = random.Random(seed)
    pts = {}
    for k in range(12):
        pts[f"d{k}"] = (2 * rng.randint(0, 4) + rng.uniform(0, 1e-10), 2 * rng.randint(0, 4))
    if len(set((round(x), y) for x, y in pts.values())) < len(pts):
        return
    p = packing_from_centers(pts, 1.0, 1e-9)
    g = extract_contact_graph(p)
    assert validate_dcr(p, g).valid
    for big in (1e-8, 1e-6, 1e-4):
        rep = validate_dcr(Packing(p.disks, big), g)
        assert rep.valid
