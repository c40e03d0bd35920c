"""Weighted disk contact representations of embedded stars in linear time.

Leaves are placed clockwise around the central disk, each one as tight as
possible against the disks placed before it.  Only a short list of earlier
disks (non-increasing in radius) can still constrain later placements; a
newly placed disk evicts every smaller disk it passed while walking that
list backwards, so the total walking effort is linear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .geometry import DEFAULT_TOL, Disk, Packing, gap, subtend_angle
from .graph import WeightedStar

TWO_PI = 2 * math.pi


class StarInputError(ValueError):
    pass


@dataclass
class StarPlacement:
    """Outcome of placing the leaves of an embedded star.

    ``angles`` are clockwise angles (radians) of the tight placement, with the
    first leaf of ``order`` at 0.  ``packing`` is only set when the star is
    realizable; its leaf positions include the distributed slack.
    """

    realizable: bool
    order: List[str]
    angles: Dict[str, float]
    residual: float
    steps: int = 0
    packing: Optional[Packing] = None
    reason: str = ""
    max_list_len: int = 0
    list_history: List[List[str]] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        out = {"realizable": self.realizable, "order": self.order,
               "residual": self.residual, "steps": self.steps}
        if self.reason:
            out["reason"] = self.reason
        return out


def rotated_order(s: WeightedStar) -> List[Tuple[str, float]]:
    """Leaf order rotated so that a largest leaf comes first (earliest on ties)."""
    leaves = list(s.leaf_order)
    best = max(range(len(leaves)), key=lambda k: (leaves[k][1], -k))
    return leaves[best:] + leaves[:best]


def _check_input(s: WeightedStar, center_radius: float) -> None:
    if not s.leaf_order:
        raise StarInputError("star has no leaves")
    if not center_radius > 0:
        raise StarInputError("center radius must be positive")
    for v, r in s.leaf_order:
        if not (r > 0 and math.isfinite(r)):
            raise StarInputError(f"radius of {v!r} must be positive")


def star_packing(center: str, center_radius: float, order: Sequence[Tuple[str, float]],
                 angles: Sequence[float], tol: float = DEFAULT_TOL) -> Packing:
    """Central disk at the origin, leaf ``k`` tangent to it at clockwise angle ``angles[k]``."""
    disks = [Disk(center, 0.0, 0.0, center_radius)]
    for (v, r), t in zip(order, angles):
        d = center_radius + r
        disks.append(Disk(v, d * math.cos(t), -d * math.sin(t), r))
    return Packing(tuple(disks), tol)


def decide_and_construct_embedded_star(s: WeightedStar, center_radius: float,
                                       tol: float = DEFAULT_TOL,
                                       record_list: bool = False) -> StarPlacement:
    if not s.embedded:
        raise StarInputError("star is not embedded; use the brute-force search")
    _check_input(s, center_radius)
    R = center_radius
    order = rotated_order(s)
    ids = [v for v, _ in order]
    r = [x for _, x in order]
    n = len(order)
    theta = [0.0] * n
    L = [0]
    steps = 0
    checked: List[Tuple[int, int]] = []
    history: List[List[str]] = []
    max_len = 1

    def sigma(a: int, b: int) -> float:
        return subtend_angle(R, r[a], r[b])

    for i in range(1, n):
        best = -math.inf
        k = len(L) - 1
        while True:
            j = L[k]
            steps += 1
            checked.append((j, i))
            best = max(best, theta[j] + sigma(j, i))
            if r[i] <= r[j]:
                break
            k -= 1
        del L[k + 1:]
        L.append(i)
        max_len = max(max_len, len(L))
        if record_list:
            history.append([ids[x] for x in L])
        theta[i] = best
        if best + sigma(i, 0) > TWO_PI:
            return StarPlacement(False, ids, dict(zip(ids, theta[:i + 1])), TWO_PI - best - sigma(i, 0),
                                 steps, None,
                                 f"leaf {ids[i]!r} would intersect {ids[0]!r} clockwise",
                                 max_len, history)

    # close the ring against the first (largest) disk
    close = -math.inf
    if n > 1:
        k = len(L) - 1
        while k > 0:
            j = L[k]
            steps += 1
            checked.append((j, 0))
            close = max(close, theta[j] + sigma(j, 0))
            if r[0] <= r[j]:
                break
            k -= 1
    residual = TWO_PI - close if n > 1 else TWO_PI
    angles = dict(zip(ids, theta))
    if not residual > 0:
        return StarPlacement(False, ids, angles, residual, steps, None,
                             "no space left after inserting all disks tightly", max_len, history)
    shifted = [theta[k] + k * residual / n for k in range(n)]
    packing = star_packing(s.center, R, order, shifted, tol)
    disks = packing.disks[1:]
    worst = min((gap(disks[a], disks[b]) for a, b in checked), default=math.inf)
    if n > 1 and worst <= tol:
        return StarPlacement(False, ids, angles, residual, steps, None,
                             f"residual angle {residual:.3e} leaves leaves within tolerance",
                             max_len, history)
    return StarPlacement(True, ids, angles, residual, steps, packing, "", max_len, history)


def embedded_star_reference(s: WeightedStar, center_radius: float,
                            tol: float = DEFAULT_TOL) -> StarPlacement:
    """Quadratic reference: each leaf clears every earlier leaf, all pairs checked."""
    _check_input(s, center_radius)
    R = center_radius
    order = rotated_order(s)
    ids = [v for v, _ in order]
    r = [x for _, x in order]
    n = len(order)
    theta = [0.0] * n
    steps = 0
    for i in range(1, n):
        theta[i] = max(theta[j] + subtend_angle(R, r[j], r[i]) for j in range(i))
        steps += i
    residual = TWO_PI
    for i in range(n):
        for j in range(i):
            residual = min(residual,
                           TWO_PI - subtend_angle(R, r[j], r[i]) - (theta[i] - theta[j]))
    angles = dict(zip(ids, theta))
    if not residual > 0:
        return StarPlacement(False, ids, angles, residual, steps, None, "no residual space")
    shifted = [theta[k] + k * residual / n for k in range(n)]
    packing = star_packing(s.center, R, order, shifted, tol)
    leaves = packing.disks[1:]
    worst = min((gap(leaves[a], leaves[b]) for a in range(n) for b in range(a)),
                default=math.inf)
    if worst <= tol:
        return StarPlacement(False, ids, angles, residual, steps, None,
                             "residual within tolerance")
    return StarPlacement(True, ids, angles, residual, steps, packing)
