"""Unit disk contact representations of caterpillars.

The decision is purely degree based: a caterpillar is realizable with unit
disks iff its maximum degree is at most 4, or it is 5 and every two degree-5
vertices of the inner path are separated by a vertex of degree at most 3.

The constructor walks the inner path once.  Each inner disk gets its leaves
pushed as far back (towards its predecessor) as the already placed disks
allow, and the next inner disk goes on the bisector of the remaining free
cone.  Odd numbers of leaves bend the path; the bend side is chosen to keep
the inner path heading as close to horizontal as possible.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .geometry import DEFAULT_TOL, Disk, Packing, validate_dcr
from .graph import Caterpillar

TWO_PI = 2 * math.pi
# Clearance between disks that must not touch, in unit-radius lengths.
CLEARANCE = 1e-4


class NotRealizableError(ValueError):
    pass


@dataclass(frozen=True)
class CaterpillarDecision:
    realizable: bool
    witness: Optional[Tuple] = None
    reason: str = ""

    def to_json(self) -> dict:
        out: dict = {"realizable": self.realizable}
        if self.witness is not None:
            out["witness"] = list(self.witness)
            out["reason"] = self.reason
        return out


def decide_caterpillar_udc(c: Caterpillar) -> CaterpillarDecision:
    degs = c.degrees()
    for i, d in enumerate(degs, start=1):
        if d >= 6:
            return CaterpillarDecision(False, (c.inner_path[i - 1],),
                                       f"vertex {c.inner_path[i - 1]} has degree {d} > 5")
    last5 = None
    separated = True
    for i, d in enumerate(degs, start=1):
        if d == 5:
            if last5 is not None and not separated:
                return CaterpillarDecision(
                    False, (last5, i),
                    f"degree-5 inner vertices {last5} and {i} are not separated "
                    "by a vertex of degree <= 3")
            last5, separated = i, False
        elif d <= 3:
            separated = True
    return CaterpillarDecision(True)


# -- construction ---------------------------------------------------------

def _norm(a: float) -> float:
    return a % TWO_PI


def _ccw_dist(a: float, b: float) -> float:
    """Counterclockwise angular distance from a to b in [0, 2pi)."""
    return (b - a) % TWO_PI


class _Grid:
    """Spatial hash over placed disk centers (cell size 4)."""

    def __init__(self):
        self.cells: Dict[Tuple[int, int], List[Tuple[str, float, float]]] = defaultdict(list)

    def add(self, vid: str, x: float, y: float) -> None:
        self.cells[(math.floor(x / 4), math.floor(y / 4))].append((vid, x, y))

    def near(self, x: float, y: float):
        gx, gy = math.floor(x / 4), math.floor(y / 4)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                yield from self.cells.get((gx + dx, gy + dy), ())


class _Arcs:
    """Directions around a unit disk at which a tangent unit disk is blocked."""

    def __init__(self, cx: float, cy: float, grid: _Grid, skip: str):
        self.cx, self.cy = cx, cy
        self.arcs: List[Tuple[float, float]] = []
        for vid, x, y in grid.near(cx, cy):
            if vid != skip:
                self.block(x, y)

    def block(self, x: float, y: float) -> None:
        dx, dy = x - self.cx, y - self.cy
        D = math.hypot(dx, dy)
        reach = 2 + CLEARANCE
        if D >= 2 + reach:
            return
        kappa = (4 + D * D - reach * reach) / (4 * D)
        if kappa > 1:
            return
        w = math.pi if kappa <= -1 else math.acos(kappa)
        self.arcs.append((math.atan2(dy, dx), w))

    def blocked(self, t: float) -> bool:
        return any(abs((t - a + math.pi) % TWO_PI - math.pi) <= w for a, w in self.arcs)

    def first_free(self, t: float, sign: int) -> Optional[float]:
        """First unblocked direction from ``t`` rotating in direction ``sign``."""
        travelled = 0.0
        while True:
            hit = None
            for a, w in self.arcs:
                if abs((t - a + math.pi) % TWO_PI - math.pi) <= w:
                    edge = a + sign * w
                    step = sign * (edge - t) % TWO_PI
                    if hit is None or step > hit:
                        hit = step
            if hit is None:
                return _norm(t)
            hit += 1e-12
            t += sign * hit
            travelled += hit
            if travelled >= TWO_PI:
                return None


def _leaf_gap_angle() -> float:
    # angle between two tangent unit-disk neighbours whose gap is CLEARANCE
    return 2 * math.asin((2 + CLEARANCE) / 4)


def construct_caterpillar_udc(c: Caterpillar, tol: float = DEFAULT_TOL,
                              check: bool = True) -> Packing:
    """Unit disk contact representation of ``c``.

    Raises :class:`NotRealizableError` if the caterpillar is not a UDC graph.
    The result is validated against the caterpillar unless ``check`` is off.
    """
    dec = decide_caterpillar_udc(c)
    if not dec.realizable:
        raise NotRealizableError(dec.reason)
    path = c.inner_path
    k = len(path)
    pos: Dict[str, Tuple[float, float]] = {path[0]: (0.0, 0.0)}
    grid = _Grid()
    grid.add(path[0], 0.0, 0.0)
    bend_up = True
    heading = 0.0

    def put(vid: str, x: float, y: float) -> None:
        pos[vid] = (x, y)
        grid.add(vid, x, y)

    leaves0 = list(c.leaves.get(path[0], ()))
    if k == 1:
        n = len(leaves0)
        for j, leaf in enumerate(leaves0):
            t = math.pi + TWO_PI * j / n
            put(leaf, 2 * math.cos(t), 2 * math.sin(t))
    else:
        g = _leaf_gap_angle()
        n = len(leaves0)
        for j, leaf in enumerate(leaves0):
            t = math.pi + (j - (n - 1) / 2) * g
            put(leaf, 2 * math.cos(t), 2 * math.sin(t))
        put(path[1], 2.0, 0.0)

    for i in range(1, k):
        v = path[i]
        cx, cy = pos[v]
        px, py = pos[path[i - 1]]
        back = math.atan2(py - cy, px - cx)
        leaves = list(c.leaves.get(v, ()))
        last = i == k - 1
        pushed = leaves[:-1] if (last and leaves) else leaves
        tail = leaves[-1] if (last and leaves) else (None if last else path[i + 1])
        if tail is None:  # last inner disk without leaves
            continue
        options = [True, False] if len(pushed) % 2 else [bend_up]
        best = None
        for extra_up in options:
            res = _try_vertex(pushed, cx, cy, back, grid, v, extra_up)
            if res is None:
                continue
            fwd = res[1]
            turn = ((fwd - heading + math.pi) % TWO_PI) - math.pi
            new_heading = heading + turn
            score = (abs(new_heading) > math.radians(80), 0 if extra_up == bend_up else 1,
                     abs(new_heading))
            if best is None or score < best[0]:
                best = (score, res, new_heading)
        if best is None:
            raise RuntimeError(f"construction failed at inner vertex {v!r}; "
                               "please report this caterpillar")
        _, (angles, fwd), heading = best
        for leaf, t in zip(pushed, angles):
            put(leaf, cx + 2 * math.cos(t), cy + 2 * math.sin(t))
        put(tail, cx + 2 * math.cos(fwd), cy + 2 * math.sin(fwd))
        if len(pushed) % 2:
            bend_up = not bend_up

    order = list(path) + [x for v in path for x in c.leaves.get(v, ())]
    p = Packing(tuple(Disk(vid, pos[vid][0], pos[vid][1], 1.0) for vid in order), tol)
    if check:
        rep = validate_dcr(p, c.graph)
        if not rep.valid:
            raise RuntimeError(f"constructed packing failed validation: {rep.violations[:3]}")
    return p


def _try_vertex(leaves, cx, cy, back, grid, skip, extra_up):
    """Leaf directions and forward direction for one inner disk, or None."""
    arcs = _Arcs(cx, cy, grid, skip)
    angles = []
    for j in range(len(leaves)):
        up = (j % 2 == 0) == extra_up
        t = arcs.first_free(back, 1 if up else -1)
        if t is None:
            return None
        angles.append(t)
        arcs.block(cx + 2 * math.cos(t), cy + 2 * math.sin(t))
    lo = arcs.first_free(back, 1)
    hi = arcs.first_free(back, -1)
    if lo is None or hi is None:
        return None
    # the free cone runs counterclockwise from lo to hi and must not contain back
    if _ccw_dist(lo, hi) >= _ccw_dist(lo, back):
        return None
    fwd = _norm(lo + _ccw_dist(lo, hi) / 2)
    if arcs.blocked(fwd):
        return None
    return angles, fwd


# -- narrow / wide --------------------------------------------------------

class Width(str, Enum):
    NARROW = "Narrow"
    WIDE = "Wide"


def narrow_wide_trace(p: Packing, c: Caterpillar) -> List[Width]:
    """Label each inner vertex Narrow or Wide (the first one is always Wide).

    ``v_i`` is narrow when some leaf disk of ``v_{i-1}`` crosses the tangent
    line between the disks of ``v_{i-1}`` and ``v_i``.
    """
    rep = validate_dcr(p, c.graph)
    if not rep.valid:
        raise ValueError("packing does not realize the caterpillar")
    d = p.by_id()
    labels = [Width.WIDE]
    for i in range(1, len(c.inner_path)):
        a, b = d[c.inner_path[i - 1]], d[c.inner_path[i]]
        ux, uy = b.cx - a.cx, b.cy - a.cy
        n = math.hypot(ux, uy)
        ux, uy = ux / n, uy / n
        # tangent line: points q with (q - a).u == a.r
        narrow = False
        for leaf in c.leaves.get(c.inner_path[i - 1], ()):
            L = d[leaf]
            dist = abs((L.cx - a.cx) * ux + (L.cy - a.cy) * uy - a.r)
            if dist < L.r - p.tol:
                narrow = True
                break
        labels.append(Width.NARROW if narrow else Width.WIDE)
    return labels


# -- brute force oracle ---------------------------------------------------

def bruteforce_caterpillar_udc(c: Caterpillar, step_deg: int = 1,
                               tol: float = DEFAULT_TOL) -> Optional[Packing]:
    """Exhaustive search over tangent placements on an angular grid.

    Children of an inner disk (next inner disk plus leaves) are placed tangent
    to it at ``back + j * step_deg`` degrees in increasing order, and every
    placement is checked against all placed disks.  The only pruning is exact:
    directions blocked by already placed disks are discarded up front, and a
    branch is cut when the free directions cannot host the remaining children
    at pairwise separations above 60 degrees.  Meant for tiny inputs.
    """
    g = c.graph
    path = c.inner_path
    pos: Dict[str, Tuple[float, float]] = {path[0]: (0.0, 0.0)}
    placed: List[str] = [path[0]]
    sep = 60.0 + 1e-9

    def fits(vid: str, x: float, y: float) -> bool:
        for u in placed:
            dist = math.hypot(x - pos[u][0], y - pos[u][1]) - 2
            if g.has_edge(vid, u):
                if abs(dist) > tol:
                    return False
            elif dist <= tol:
                return False
        return True

    def capacity(free: List[float], lo: float, hi: float) -> int:
        count, last = 0, None
        for off in free:
            if off <= lo or off >= hi:
                continue
            if last is None or off - last > sep:
                count, last = count + 1, off
        return count

    def at(idx: int) -> bool:
        if idx == len(path):
            return True
        v = path[idx]
        vx, vy = pos[v]
        nxt = path[idx + 1] if idx + 1 < len(path) else None
        leaves = list(c.leaves.get(v, ()))
        q = len(leaves) + (nxt is not None)
        root = idx == 0
        if root:
            back = 0.0
        else:
            pv = pos[path[idx - 1]]
            back = math.degrees(math.atan2(pv[1] - vy, pv[0] - vx))
        free = []
        for k in range(0 if root else 1, round(360 / step_deg)):
            off = k * step_deg
            t = math.radians(back + off)
            x, y = vx + 2 * math.cos(t), vy + 2 * math.sin(t)
            if all(math.hypot(x - pos[u][0], y - pos[u][1]) - 2 > tol
                   for u in placed if u != v):
                free.append(off)
        # the closing gap runs to the back disk (offset 360) or, at the
        # root, to the first child placed at offset 0
        if capacity(free, -1, 360) < q:
            return False

        def rec(j: int, last: float, fwd_done: bool, nleaf: int) -> bool:
            if j == q:
                return at(idx + 1)
            hi = 360 - sep if root else 360
            for off in free:
                if root and j == 0:
                    if off != 0:
                        break
                elif off - last <= sep:
                    continue
                elif off >= hi:
                    break
                if capacity(free, off + sep, hi) < q - j - 1:
                    break
                t = math.radians(back + off)
                x, y = vx + 2 * math.cos(t), vy + 2 * math.sin(t)
                choices = []
                if not fwd_done and nxt is not None:
                    choices.append((nxt, True))
                if nleaf < len(leaves):
                    choices.append((leaves[nleaf], False))
                for vid, is_fwd in choices:
                    if not fits(vid, x, y):
                        continue
                    pos[vid] = (x, y)
                    placed.append(vid)
                    if rec(j + 1, off, fwd_done or is_fwd, nleaf + (not is_fwd)):
                        return True
                    placed.pop()
                    del pos[vid]
            return False

        return rec(0, -360.0, False, 0)

    if at(0):
        return Packing(tuple(Disk(v, pos[v][0], pos[v][1], 1.0) for v in placed), tol)
    return None
