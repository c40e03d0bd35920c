"""Unit disk packings of internally triangulated outerplane graphs.

Such a graph can be dismantled by repeatedly removing a degree-2 vertex until a
triangle remains.  Reversing the process, each removed disk touches two
already-placed adjacent disks, which leaves exactly two candidate positions;
the embedding picks one.  The packing is therefore unique up to isometry, or
it does not exist.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .geometry import DEFAULT_TOL, Disk, Packing, disk_relation, Relation, tangent_point
from .graph import Graph, GraphError, RotationSystem, is_internally_triangulated_outerplane, trace_faces, find_outer_face


class RigidityError(ValueError):
    pass


class NotUnitRealizable(RigidityError):
    def __init__(self, vertex: str, msg: str):
        super().__init__(f"not unit-realizable at {vertex!r}: {msg}")
        self.vertex = vertex


@dataclass(frozen=True)
class PeelSequence:
    base: Tuple[str, ...]
    steps: Tuple[Tuple[str, str, str], ...]

    def replay(self) -> Graph:
        """The graph obtained by adding the peeled vertices back in reverse order."""
        vs = list(self.base)
        es = [(self.base[i], self.base[j]) for i in range(len(self.base))
              for j in range(i + 1, len(self.base))]
        for v, a, b in reversed(self.steps):
            vs.append(v)
            es += [(v, a), (v, b)]
        return Graph(vs, es)

    def to_json(self) -> dict:
        return {"base": list(self.base), "steps": [list(s) for s in self.steps]}


def check_rigidity_precondition(g: Graph, rs: RotationSystem) -> bool:
    if len(g.vertices) == 3 and len(g.edges) == 3:
        ok_tri = True
    else:
        ok_tri = g.is_biconnected()
    if not ok_tri:
        # still surface malformed rotations as errors
        trace_faces(g, rs)
        return False
    return is_internally_triangulated_outerplane(g, rs)


def _inner_triangles(g: Graph, rs: RotationSystem) -> Dict[FrozenSet[str], Tuple[str, str, str]]:
    faces = trace_faces(g, rs)
    k = find_outer_face(faces, rs.outer_face)
    return {frozenset(f): f for i, f in enumerate(faces) if i != k}


def peel(g: Graph, largest_first: bool = False) -> PeelSequence:
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    steps = []
    while len(adj) > 3:
        cands = [v for v, ns in adj.items() if len(ns) == 2]
        if not cands:
            raise RigidityError("no degree-2 vertex to remove")
        v = max(cands) if largest_first else min(cands)
        a, b = sorted(adj[v])
        if b not in adj[a]:
            raise RigidityError(f"neighbours of {v!r} are not adjacent")
        steps.append((v, a, b))
        for u in (a, b):
            adj[u].discard(v)
        del adj[v]
    return PeelSequence(tuple(sorted(adj)), tuple(steps))


def reconstruct_rigid(g: Graph, rs: RotationSystem, largest_first: bool = False,
                      tol: float = DEFAULT_TOL) -> Tuple[Packing, PeelSequence]:
    if not check_rigidity_precondition(g, rs):
        raise RigidityError("graph is not a biconnected internally triangulated outerplane graph")
    tris = _inner_triangles(g, rs)
    seq = peel(g, largest_first)
    base = tris[frozenset(seq.base)]
    k = base.index(min(base))
    x, y, z = base[k:] + base[:k]
    pos: Dict[str, Tuple[float, float]] = {x: (0.0, 0.0), y: (2.0, 0.0), z: (1.0, 3 ** 0.5)}
    for v, a, b in reversed(seq.steps):
        tri = tris.get(frozenset((v, a, b)))
        if tri is None:
            raise RigidityError(f"{v!r}, {a!r}, {b!r} do not bound an inner face")
        i = tri.index(a)
        if tri[(i + 1) % 3] != b:
            a, b = b, a
        # v lies to the left of a -> b
        pts = tangent_point(pos[a], 2.0, pos[b], 2.0)
        if not pts:
            raise NotUnitRealizable(v, f"neighbours {a!r} and {b!r} drifted apart")
        p = pts[0]
        d = Disk(v, p[0], p[1], 1.0)
        for u, q in pos.items():
            rel = disk_relation(d, Disk(u, q[0], q[1], 1.0), tol)
            if rel is Relation.OVERLAP:
                raise NotUnitRealizable(v, f"forced position overlaps {u!r}")
            if rel is Relation.TANGENT and not g.has_edge(u, v):
                raise NotUnitRealizable(v, f"forced position touches non-neighbour {u!r}")
        pos[v] = p
    disks = tuple(Disk(v, *pos[v], 1.0) for v in g.vertices)
    return Packing(disks, tol), seq


# ---------------------------------------------------------------- generators

def rotation_from_faces(g: Graph, inner: List[Tuple[str, ...]], outer_ccw: List[str]) -> RotationSystem:
    """Counterclockwise rotation of a 2-connected outerplane graph from its CCW faces."""
    succ: Dict[str, Dict[str, str]] = {v: {} for v in g.vertices}
    for f in inner:
        n = len(f)
        for i in range(n):
            u, v, w = f[i - 1], f[i], f[(i + 1) % n]
            succ[v][w] = u
    order = {}
    n = len(outer_ccw)
    for i, v in enumerate(outer_ccw):
        p, q = outer_ccw[i - 1], outer_ccw[(i + 1) % n]
        chain = [q]
        while chain[-1] != p:
            chain.append(succ[v][chain[-1]])
            if len(chain) > len(g.neighbors(v)):
                raise GraphError(f"faces around {v!r} do not form a fan")
        order[v] = tuple(chain)
    return RotationSystem(order, tuple(outer_ccw))


def triangle_strip_graph(n: int, rng: Optional[random.Random] = None,
                         strip_bias: float = 0.5) -> Tuple[Graph, RotationSystem]:
    """Random internally triangulated outerplane graph on ``n >= 3`` vertices.

    Each new vertex is glued as an ear onto an edge of the outer cycle; with
    probability ``strip_bias`` that edge is one of the two created last, which
    produces long strips.
    """
    if n < 3:
        raise ValueError("need at least 3 vertices")
    rng = rng or random.Random(0)
    names = [f"v{i}" for i in range(n)]
    cyc = names[:3]
    inner = [tuple(names[:3])]
    edges = [(names[0], names[1]), (names[1], names[2]), (names[0], names[2])]
    last: List[Tuple[str, str]] = []
    for k in range(3, n):
        new = names[k]
        if last and rng.random() < strip_bias:
            a, b = rng.choice(last)
        else:
            i = rng.randrange(len(cyc))
            a, b = cyc[i], cyc[(i + 1) % len(cyc)]
        i = cyc.index(a)
        cyc.insert(i + 1, new)
        inner.append((b, a, new))
        edges += [(a, new), (new, b)]
        last = [(a, new), (new, b)]
    g = Graph(names, edges)
    return g, rotation_from_faces(g, inner, cyc)


def fan_graph(k: int) -> Tuple[Graph, RotationSystem]:
    """Hub ``h`` with a path of ``k`` rim vertices, all rim vertices joined to the hub."""
    rim = [f"r{i}" for i in range(k)]
    g = Graph(["h"] + rim, [("h", r) for r in rim] + list(zip(rim, rim[1:])))
    inner = [("h", rim[i], rim[i + 1]) for i in range(k - 1)]
    outer = ["h"] + rim
    return g, rotation_from_faces(g, inner, outer)
