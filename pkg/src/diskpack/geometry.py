"""Disk primitives, contact predicates and packing validation.

All predicates share one tolerance model: a pair of disks whose boundary gap
``g = |c_a - c_b| - (r_a + r_b)`` satisfies ``|g| <= tol`` is *tangent*,
``g < -tol`` is an overlap and ``g > tol`` is disjoint.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .graph import Graph

DEFAULT_TOL = 1e-9


class GeometryError(ValueError):
    """Raised for degenerate disks or geometrically impossible requests."""


class OverlapError(GeometryError):
    def __init__(self, a: str, b: str, gap: float):
        super().__init__(f"disks {a!r} and {b!r} overlap (gap {gap:.3e})")
        self.pair = (a, b)
        self.gap = gap


class Relation(str, Enum):
    DISJOINT = "Disjoint"
    TANGENT = "Tangent"
    OVERLAP = "Overlap"


class ViolationKind(str, Enum):
    OVERLAP = "Overlap"
    MISSING_CONTACT = "MissingContact"
    FORBIDDEN_CONTACT = "ForbiddenContact"
    RADIUS_MISMATCH = "RadiusMismatch"


@dataclass(frozen=True)
class Disk:
    id: str
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.cx, self.cy, self.r)):
            raise GeometryError(f"degenerate disk {self.id!r}: non-finite value")
        if self.r <= 0:
            raise GeometryError(f"degenerate disk {self.id!r}: radius {self.r} <= 0")

    @property
    def center(self) -> Tuple[float, float]:
        return (self.cx, self.cy)

    def scaled(self, lam: float) -> "Disk":
        return Disk(self.id, self.cx * lam, self.cy * lam, self.r * lam)


@dataclass(frozen=True)
class Packing:
    disks: Tuple[Disk, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "disks", tuple(self.disks))
        ids = [d.id for d in self.disks]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise GeometryError(f"duplicate disk ids: {dup}")
        if not (self.tol >= 0 and math.isfinite(self.tol)):
            raise GeometryError(f"tolerance must be finite and >= 0, got {self.tol}")
        if self.disks:
            rmin = min(d.r for d in self.disks)
            if self.tol >= rmin / 100:
                raise GeometryError(
                    f"tolerance {self.tol} too large for smallest radius {rmin}")

    def __len__(self) -> int:
        return len(self.disks)

    def __iter__(self) -> Iterator[Disk]:
        return iter(self.disks)

    @property
    def ids(self) -> List[str]:
        return [d.id for d in self.disks]

    def by_id(self) -> Dict[str, Disk]:
        return {d.id: d for d in self.disks}

    def scaled(self, lam: float) -> "Packing":
        return Packing(tuple(d.scaled(lam) for d in self.disks), self.tol * lam)

    def to_json(self) -> dict:
        return {
            "tol": self.tol,
            "disks": [{"id": d.id, "cx": d.cx, "cy": d.cy, "r": d.r} for d in self.disks],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Packing":
        if not isinstance(data, Mapping) or "disks" not in data:
            raise ValueError("packing JSON must be an object with a 'disks' list")
        disks = []
        for k, item in enumerate(data["disks"]):
            try:
                disks.append(Disk(str(item["id"]), float(item["cx"]),
                                  float(item["cy"]), float(item["r"])))
            except KeyError as exc:
                raise ValueError(f"disks[{k}]: missing field {exc.args[0]!r}") from None
            except (TypeError, ValueError) as exc:
                raise ValueError(f"disks[{k}]: {exc}") from None
        return cls(tuple(disks), float(data.get("tol", DEFAULT_TOL)))


def load_packing(path) -> Packing:
    with open(path) as fh:
        return Packing.from_json(json.load(fh))


def dump_packing(p: Packing, path) -> None:
    with open(path, "w") as fh:
        json.dump(p.to_json(), fh, indent=1)
        fh.write("\n")


@dataclass(frozen=True)
class Violation:
    a: str
    b: str
    kind: ViolationKind
    gap: float

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "kind": self.kind.value, "gap": self.gap}


@dataclass(frozen=True)
class ContactReport:
    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "Valid" if self.valid else "Invalid"

    def kinds(self) -> List[ViolationKind]:
        return [v.kind for v in self.violations]

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "violations": [v.to_json() for v in self.violations]}


def gap(a: Disk, b: Disk) -> float:
    return math.hypot(a.cx - b.cx, a.cy - b.cy) - (a.r + b.r)


def disk_relation(a: Disk, b: Disk, tol: float = DEFAULT_TOL) -> Relation:
    if tol < 0:
        raise GeometryError("tol must be >= 0")
    g = gap(a, b)
    if not math.isfinite(g):
        raise GeometryError("degenerate disk")
    if g < -tol:
        return Relation.OVERLAP
    if g <= tol:
        return Relation.TANGENT
    return Relation.DISJOINT


def near_pairs(disks: Sequence[Disk], tol: float) -> Iterator[Tuple[Disk, Disk, float]]:
    """Yield every pair whose gap is <= tol, in deterministic order.

    Uses a uniform grid with cell size ``2 * max radius``; two disks can only
    be within ``tol`` of each other if their centers share a cell or sit in
    neighbouring cells.
    """
    if len(disks) < 2:
        return
    cell = 2 * max(d.r for d in disks) + 2 * tol
    grid: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for k, d in enumerate(disks):
        grid[(math.floor(d.cx / cell), math.floor(d.cy / cell))].append(k)
    for k, d in enumerate(disks):
        gx, gy = math.floor(d.cx / cell), math.floor(d.cy / cell)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in grid.get((gx + dx, gy + dy), ()):
                    if j <= k:
                        continue
                    g = gap(d, disks[j])
                    if g <= tol:
                        yield d, disks[j], g


def extract_contact_graph(p: Packing) -> Graph:
    """Contact graph of ``p``; raises :class:`OverlapError` on the first overlap."""
    edges = []
    for a, b, g in near_pairs(p.disks, p.tol):
        if g < -p.tol:
            raise OverlapError(a.id, b.id, g)
        edges.append((a.id, b.id))
    return Graph(p.ids, edges)


def _edge_key(u: str, v: str) -> Tuple[str, str]:
    return (u, v) if u <= v else (v, u)


def validate_dcr(p: Packing, g: Graph,
                 weights: Optional[Mapping[str, float]] = None) -> ContactReport:
    """Check that ``p`` is a disk contact representation of ``g``.

    With ``weights`` the radii must also be proportional to them; the scale is
    fitted on the lexicographically smallest vertex and then checked for every
    vertex.
    """
    if set(p.ids) != set(g.vertices):
        missing = sorted(set(g.vertices) - set(p.ids))
        extra = sorted(set(p.ids) - set(g.vertices))
        raise GeometryError(f"id mismatch: missing disks {missing}, unknown disks {extra}")
    tol = p.tol
    violations: List[Violation] = []
    touching = set()
    for a, b, gp in near_pairs(p.disks, tol):
        key = _edge_key(a.id, b.id)
        if gp < -tol:
            violations.append(Violation(*key, ViolationKind.OVERLAP, gp))
            continue
        touching.add(key)
        if not g.has_edge(*key):
            violations.append(Violation(*key, ViolationKind.FORBIDDEN_CONTACT, gp))
    by_id = p.by_id()
    overlapping = {(v.a, v.b) for v in violations if v.kind is ViolationKind.OVERLAP}
    for u, v in sorted(_edge_key(*e) for e in g.edges):
        if (u, v) not in touching and (u, v) not in overlapping:
            violations.append(Violation(u, v, ViolationKind.MISSING_CONTACT,
                                        gap(by_id[u], by_id[v])))
    if weights is not None and p.disks:
        v0 = min(p.ids)
        lam = by_id[v0].r / float(weights[v0])
        for d in sorted(p.disks, key=lambda d: d.id):
            err = d.r - lam * float(weights[d.id])
            if abs(err) > tol:
                violations.append(Violation(d.id, d.id, ViolationKind.RADIUS_MISMATCH, err))
    order = {k: i for i, k in enumerate(ViolationKind)}
    violations.sort(key=lambda v: (order[v.kind], v.a, v.b))
    return ContactReport(tuple(violations))


def subtend_angle(R: float, r1: float, r2: float, tol: float = DEFAULT_TOL) -> float:
    """Angle at the center of a disk of radius ``R`` between two tangent
    neighbours of radii ``r1`` and ``r2`` that also touch each other."""
    if min(R, r1, r2) <= 0:
        raise GeometryError("radii must be positive")
    a, b = R + r1, R + r2
    c = (a * a + b * b - (r1 + r2) ** 2) / (2 * a * b)
    if c > 1 + tol or c < -1 - tol:
        raise GeometryError("impossible configuration")
    return math.acos(max(-1.0, min(1.0, c)))


def tangent_point(c1: Tuple[float, float], s1: float,
                  c2: Tuple[float, float], s2: float) -> List[Tuple[float, float]]:
    """Centers at distance ``s1`` from ``c1`` and ``s2`` from ``c2`` (0, 1 or 2 points).

    The first returned point lies to the left of the directed line c1 -> c2.
    """
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    d = math.hypot(dx, dy)
    if d == 0 or d > s1 + s2 or d < abs(s1 - s2):
        return []
    a = (s1 * s1 - s2 * s2 + d * d) / (2 * d)
    h = math.sqrt(max(0.0, s1 * s1 - a * a))
    mx, my = c1[0] + a * dx / d, c1[1] + a * dy / d
    ux, uy = -dy / d, dx / d
    if h == 0:
        return [(mx, my)]
    return [(mx + h * ux, my + h * uy), (mx - h * ux, my - h * uy)]


def render_svg(p: Packing, labels: bool = False, scale: float = 1.0) -> str:
    """SVG 1.1 document with one ``circle`` per disk (and ``text`` labels)."""
    if p.disks:
        xmin = min(d.cx - d.r for d in p.disks)
        xmax = max(d.cx + d.r for d in p.disks)
        ymin = min(d.cy - d.r for d in p.disks)
        ymax = max(d.cy + d.r for d in p.disks)
        mx, my = 0.05 * (xmax - xmin), 0.05 * (ymax - ymin)
        xmin, xmax, ymin, ymax = xmin - mx, xmax + mx, ymin - my, ymax + my
    else:
        xmin, xmax, ymin, ymax = 0.0, 1.0, -1.0, 0.0
    w, h = xmax - xmin, ymax - ymin
    # SVG y grows downwards; flip so the drawing matches the math frame.
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w * scale:.6g}" height="{h * scale:.6g}" '
        f'viewBox="{xmin + 0.0:.12g} {0.0 - ymax:.12g} {w:.12g} {h:.12g}">',
    ]
    stroke = max(w, h) / 500
    for d in p.disks:
        out.append(f'  <circle id="{_xml(d.id)}" cx="{d.cx:.12g}" cy="{-d.cy:.12g}" '
                   f'r="{d.r:.12g}" fill="none" stroke="black" '
                   f'stroke-width="{stroke:.6g}"/>')
    if labels:
        for d in p.disks:
            out.append(f'  <text x="{d.cx:.12g}" y="{-d.cy:.12g}" '
                       f'font-size="{d.r * 0.6:.6g}" text-anchor="middle" '
                       f'dominant-baseline="central">{_xml(d.id)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _xml(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def packing_from_centers(centers: Mapping[str, Tuple[float, float]],
                         radii: Mapping[str, float] | float = 1.0,
                         tol: float = DEFAULT_TOL,
                         order: Optional[Iterable[str]] = None) -> Packing:
    keys = list(order) if order is not None else list(centers)
    rad = (lambda k: float(radii)) if isinstance(radii, (int, float)) else (lambda k: radii[k])
    return Packing(tuple(Disk(k, centers[k][0], centers[k][1], rad(k)) for k in keys), tol)
