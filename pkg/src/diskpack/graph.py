"""Graphs, rotation systems and the class views used by the recognizers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx


class GraphError(ValueError):
    pass


class RotationError(GraphError):
    pass


Edge = Tuple[str, str]


def _key(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    edges: FrozenSet[Edge]
    weights: Optional[Mapping[str, float]] = None
    _adj: Mapping[str, Tuple[str, ...]] = field(default=None, repr=False, compare=False)

    def __init__(self, vertices: Iterable, edges: Iterable = (),
                 weights: Optional[Mapping] = None):
        vs = tuple(str(v) for v in vertices)
        if len(set(vs)) != len(vs):
            raise GraphError("duplicate vertex ids")
        vset = set(vs)
        es = set()
        adj: Dict[str, List[str]] = {v: [] for v in vs}
        for e in edges:
            u, v = (str(x) for x in e)
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            if u not in vset or v not in vset:
                raise GraphError(f"edge ({u!r}, {v!r}) has an unknown endpoint")
            k = _key(u, v)
            if k in es:
                raise GraphError(f"parallel edge {k}")
            es.add(k)
            adj[u].append(v)
            adj[v].append(u)
        if weights is not None:
            weights = {str(k): w for k, w in weights.items()}
            for v in vs:
                if v not in weights:
                    raise GraphError(f"missing weight for {v!r}")
                if not weights[v] > 0:
                    raise GraphError(f"weight of {v!r} must be positive")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_adj", {v: tuple(sorted(n)) for v, n in adj.items()})

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: str) -> Tuple[str, ...]:
        return self._adj[v]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def has_edge(self, u: str, v: str) -> bool:
        return _key(u, v) in self.edges

    def to_nx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and nx.is_connected(self.to_nx())

    def is_biconnected(self) -> bool:
        return len(self.vertices) >= 3 and nx.is_biconnected(self.to_nx())

    def same_as(self, other: "Graph") -> bool:
        return set(self.vertices) == set(other.vertices) and self.edges == other.edges


@dataclass(frozen=True)
class RotationSystem:
    """Counterclockwise neighbour order per vertex, plus an optional outer face.

    ``outer_face`` is a boundary walk given as a vertex sequence; the walk is
    closed implicitly (last vertex connects to the first).
    """

    order: Mapping[str, Tuple[str, ...]]
    outer_face: Optional[Tuple[str, ...]] = None

    def __init__(self, order: Mapping, outer_face: Optional[Sequence] = None):
        object.__setattr__(self, "order",
                           {str(v): tuple(str(x) for x in ns) for v, ns in order.items()})
        object.__setattr__(self, "outer_face",
                           None if outer_face is None else tuple(str(x) for x in outer_face))


def validate_rotation(g: Graph, rs: RotationSystem) -> None:
    for v in g.vertices:
        if v not in rs.order:
            raise RotationError(f"rotation missing for vertex {v!r}")
        got = rs.order[v]
        if len(set(got)) != len(got) or set(got) != set(g.neighbors(v)):
            raise RotationError(
                f"rotation at {v!r} is not a permutation of its neighbours: "
                f"{list(got)} vs {list(g.neighbors(v))}")
    extra = set(rs.order) - set(g.vertices)
    if extra:
        raise RotationError(f"rotation given for unknown vertices {sorted(extra)}")
    if rs.outer_face is not None:
        walk = rs.outer_face
        if len(walk) == 0:
            raise RotationError("outer face walk is empty")
        if len(walk) > 1:
            for a, b in zip(walk, walk[1:] + walk[:1]):
                if not g.has_edge(a, b):
                    raise RotationError(f"outer face uses non-edge ({a!r}, {b!r})")


def trace_faces(g: Graph, rs: RotationSystem) -> List[Tuple[str, ...]]:
    """Faces of the embedding as vertex cycles.

    With counterclockwise rotations, bounded faces come out counterclockwise
    and the outer face clockwise.
    """
    validate_rotation(g, rs)
    pos = {v: {u: i for i, u in enumerate(rs.order[v])} for v in g.vertices}
    seen = set()
    faces = []
    darts = sorted([(u, v) for u, v in g.edges] + [(v, u) for u, v in g.edges])
    for start in darts:
        if start in seen:
            continue
        face = []
        u, v = start
        while (u, v) not in seen:
            seen.add((u, v))
            face.append(u)
            rot = rs.order[v]
            w = rot[(pos[v][u] - 1) % len(rot)]
            u, v = v, w
        faces.append(tuple(face))
    return faces


def _cyclic_equal(a: Sequence[str], b: Sequence[str]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    s = list(b) + list(b)
    n = len(a)
    return any(s[i:i + n] == list(a) for i in range(n))


@dataclass(frozen=True)
class RotationCheck:
    ok: bool
    faces: int
    genus: int
    message: str = ""

    def to_json(self) -> dict:
        return {"ok": self.ok, "faces": self.faces, "genus": self.genus,
                "message": self.message}


def check_rotation_system(g: Graph, rs: RotationSystem) -> RotationCheck:
    """Permutation validity plus Euler's formula on the traced faces.

    Raises :class:`RotationError` for malformed order lists; a valid but
    non-planar rotation is reported with its genus.
    """
    validate_rotation(g, rs)
    if not g.is_connected():
        raise GraphError("rotation check requires a connected graph")
    faces = trace_faces(g, rs) if g.edges else [()]
    V, E, F = len(g.vertices), len(g.edges), len(faces)
    genus = (2 - V + E - F) // 2
    if genus != 0:
        return RotationCheck(False, F, genus,
                             f"V - E + F = {V - E + F} != 2: embedding has genus {genus}")
    return RotationCheck(True, F, 0)


def find_outer_face(faces: Sequence[Tuple[str, ...]], walk: Sequence[str]) -> Optional[int]:
    for i, f in enumerate(faces):
        if _cyclic_equal(f, walk) or _cyclic_equal(f, list(reversed(walk))):
            return i
    return None


def is_internally_triangulated_outerplane(g: Graph, rs: RotationSystem) -> bool:
    """Planar embedding, every vertex on the named outer face, inner faces triangles."""
    check = check_rotation_system(g, rs)
    if not check.ok:
        return False
    if rs.outer_face is None:
        raise RotationError("an explicit outer face is required")
    faces = trace_faces(g, rs)
    k = find_outer_face(faces, rs.outer_face)
    if k is None:
        return False
    if set(faces[k]) != set(g.vertices):
        return False
    return all(len(f) == 3 for i, f in enumerate(faces) if i != k)


@dataclass(frozen=True)
class Caterpillar:
    graph: Graph
    inner_path: Tuple[str, ...]
    leaves: Mapping[str, Tuple[str, ...]]

    def degrees(self) -> List[int]:
        return [self.graph.degree(v) for v in self.inner_path]

    def rebuild(self) -> Graph:
        edges = list(zip(self.inner_path, self.inner_path[1:]))
        for v, ls in self.leaves.items():
            edges.extend((v, x) for x in ls)
        verts = list(self.inner_path) + [x for ls in self.leaves.values() for x in ls]
        return Graph(verts, edges)


@dataclass(frozen=True)
class WeightedStar:
    center: str
    leaf_order: Tuple[Tuple[str, float], ...]
    embedded: bool = False

    def __post_init__(self):
        for v, r in self.leaf_order:
            if not r > 0:
                raise GraphError(f"radius of leaf {v!r} must be positive")

    @property
    def radii(self) -> List[float]:
        return [r for _, r in self.leaf_order]

    def graph(self) -> Graph:
        ids = [v for v, _ in self.leaf_order]
        return Graph([self.center] + ids, [(self.center, v) for v in ids])


def _is_tree(g: Graph) -> bool:
    return g.is_connected() and len(g.edges) == len(g.vertices) - 1


def caterpillar_view(g: Graph) -> Optional[Caterpillar]:
    """Caterpillar structure of ``g`` or None if ``g`` is not a caterpillar.

    The inner path is what remains after deleting all leaves once.  When that
    empties the graph (one or two vertices) the smallest id is the inner path.
    """
    if not _is_tree(g):
        return None
    n = len(g.vertices)
    if n <= 2:
        v = min(g.vertices)
        return Caterpillar(g, (v,), {v: tuple(x for x in g.vertices if x != v)})
    inner = [v for v in g.vertices if g.degree(v) > 1]
    inner_set = set(inner)
    ideg = {v: sum(1 for u in g.neighbors(v) if u in inner_set) for v in inner}
    if any(d > 2 for d in ideg.values()):
        return None
    if len(inner) == 1:
        path = inner
    else:
        ends = sorted(v for v in inner if ideg[v] == 1)
        path = [ends[0]]
        prev = None
        while True:
            nxt = [u for u in g.neighbors(path[-1]) if u in inner_set and u != prev]
            if not nxt:
                break
            prev = path[-1]
            path.append(nxt[0])
    leaves = {v: tuple(u for u in g.neighbors(v) if g.degree(u) == 1) for v in path}
    return Caterpillar(g, tuple(path), leaves)


def star_view(g: Graph, rs: Optional[RotationSystem] = None,
              embedded: bool = False) -> Optional[WeightedStar]:
    """Star structure of ``g``; leaf radii come from the graph weights (1 if absent)."""
    if not _is_tree(g):
        return None
    n = len(g.vertices)
    if n == 1:
        center = g.vertices[0]
    elif n == 2:
        center = min(g.vertices)
    else:
        hubs = [v for v in g.vertices if g.degree(v) == n - 1]
        if not hubs:
            return None
        center = hubs[0]
    w = g.weights or {}
    if rs is not None and center in rs.order:
        order = list(rs.order[center])
        if set(order) != set(g.neighbors(center)) or len(order) != len(set(order)):
            raise RotationError("rotation at the star center must list every leaf once")
    else:
        if embedded:
            raise RotationError("embedded star needs a rotation for its center")
        order = sorted(g.neighbors(center))
    return WeightedStar(center, tuple((v, float(w.get(v, 1.0))) for v in order), embedded)


@dataclass(frozen=True)
class Classification:
    kind: str  # "Caterpillar", "Star" or "Other"
    caterpillar: Optional[Caterpillar] = None
    star: Optional[WeightedStar] = None


def classify(g: Graph) -> Classification:
    if not g.vertices:
        raise GraphError("empty graph")
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    s = star_view(g)
    if s is not None:
        return Classification("Star", star=s)
    c = caterpillar_view(g)
    if c is not None:
        return Classification("Caterpillar", caterpillar=c)
    return Classification("Other")


# -- JSON -----------------------------------------------------------------

def graph_from_json(data: Mapping) -> Tuple[Graph, Optional[RotationSystem]]:
    if not isinstance(data, Mapping):
        raise GraphError("graph JSON must be an object")
    if "vertices" not in data:
        raise GraphError("graph JSON: missing field 'vertices'")
    edges = data.get("edges", [])
    for k, e in enumerate(edges):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise GraphError(f"edges[{k}]: expected a pair of vertex ids")
    weights = data.get("weights")
    if weights is not None:
        try:
            weights = {str(k): float(v) for k, v in weights.items()}
        except (TypeError, ValueError, AttributeError) as exc:
            raise GraphError(f"weights: {exc}") from None
    g = Graph(data["vertices"], edges, weights)
    rs = None
    if data.get("rotation") is not None:
        rs = RotationSystem(data["rotation"], data.get("outerFace"))
    elif data.get("outerFace") is not None:
        raise GraphError("outerFace given without rotation")
    return g, rs


def graph_to_json(g: Graph, rs: Optional[RotationSystem] = None) -> dict:
    out: dict = {"vertices": list(g.vertices), "edges": [list(e) for e in sorted(g.edges)]}
    if g.weights is not None:
        out["weights"] = dict(g.weights)
    if rs is not None:
        out["rotation"] = {v: list(ns) for v, ns in rs.order.items()}
        if rs.outer_face is not None:
            out["outerFace"] = list(rs.outer_face)
    return out


def load_graph(path) -> Tuple[Graph, Optional[RotationSystem]]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return graph_from_json(data)


def dump_graph(path, g: Graph, rs: Optional[RotationSystem] = None) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_json(g, rs), fh, indent=1)
        fh.write("\n")


def path_graph(n: int, prefix: str = "v") -> Graph:
    ids = [f"{prefix}{i}" for i in range(n)]
    return Graph(ids, list(zip(ids, ids[1:])))


def caterpillar_from_degrees(degrees: Sequence[int]) -> Caterpillar:
    """Build a caterpillar whose inner path has the given degrees.

    Inner vertices are ``p0, p1, ...``; leaves of ``pi`` are ``pi_l0, ...``.
    """
    k = len(degrees)
    if k == 0:
        raise GraphError("need at least one inner vertex")
    inner = [f"p{i}" for i in range(k)]
    edges = list(zip(inner, inner[1:]))
    verts = list(inner)
    for i, d in enumerate(degrees):
        path_nbrs = (i > 0) + (i < k - 1)
        nl = d - path_nbrs
        if nl < 0:
            raise GraphError(f"degree {d} too small at inner position {i}")
        for j in range(nl):
            leaf = f"p{i}_l{j}"
            verts.append(leaf)
            edges.append((inner[i], leaf))
    g = Graph(verts, edges)
    leaves = {v: tuple(u for u in g.neighbors(v) if g.degree(u) == 1 and u not in inner)
              for v in inner}
    return Caterpillar(g, tuple(inner), leaves)
