"""Exhaustive reference searches for small instances.

``star_wdc_bruteforce`` tries every circular leaf order of an unembedded
star; ``three_partition_bruteforce`` solves 3-Partition by backtracking.
Both are exponential and meant as ground truth for tests and the CLI.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .geometry import DEFAULT_TOL, Packing
from .graph import WeightedStar
from .star import decide_and_construct_embedded_star, rotated_order


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class ThreePartitionInstance:
    A: Tuple[int, ...]
    B: int

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(int(a) for a in self.A))

    @property
    def n(self) -> int:
        return len(self.A) // 3

    def validate(self) -> None:
        if self.B <= 0:
            raise OracleError(f"B must be positive, got {self.B}")
        if len(self.A) % 3:
            raise OracleError(f"|A| = {len(self.A)} is not a multiple of 3")
        for a in self.A:
            if not Fraction(self.B, 4) < a < Fraction(self.B, 2):
                raise OracleError(f"element {a} violates B/4 < a < B/2 for B = {self.B}")
        if sum(self.A) != self.n * self.B:
            raise OracleError(f"sum of A is {sum(self.A)}, expected n*B = {self.n * self.B}")


def star_wdc_bruteforce(s: WeightedStar, center_radius: float, max_leaves: int = 10,
                        tol: float = DEFAULT_TOL) -> Optional[Tuple[List[str], Packing]]:
    """First realizable circular order (largest leaf first, mirror images skipped)."""
    k = len(s.leaf_order)
    if k > max_leaves:
        raise OracleError(f"instance too large for oracle: {k} leaves > {max_leaves}")
    if k == 0:
        raise OracleError("star has no leaves")
    leaves = rotated_order(WeightedStar(s.center, s.leaf_order, True))
    first, rest = leaves[0], leaves[1:]
    for perm in itertools.permutations(range(len(rest))):
        if perm[::-1] < perm:
            continue
        order = (first,) + tuple(rest[i] for i in perm)
        res = decide_and_construct_embedded_star(WeightedStar(s.center, order, True),
                                                 center_radius, tol)
        if res.realizable:
            return res.order, res.packing
    return None


def three_partition_bruteforce(inst: ThreePartitionInstance) -> Optional[List[Tuple[int, int, int]]]:
    inst.validate()
    B = inst.B
    remaining = sorted(inst.A, reverse=True)
    triples: List[Tuple[int, int, int]] = []

    def rec(items: List[int]) -> bool:
        if not items:
            return True
        a, tail = items[0], items[1:]
        seen = set()
        for i in range(len(tail)):
            b = tail[i]
            for j in range(i + 1, len(tail)):
                c = tail[j]
                if a + b + c != B or (b, c) in seen:
                    continue
                seen.add((b, c))
                triples.append((a, b, c))
                if rec(tail[:i] + tail[i + 1:j] + tail[j + 1:]):
                    return True
                triples.pop()
        return False

    return list(triples) if rec(remaining) else None


def three_partition_dp(inst: ThreePartitionInstance) -> bool:
    """Feasibility by dynamic programming over (open triple sums) states."""
    inst.validate()
    B = inst.B
    states = {()}
    for a in sorted(inst.A):
        nxt = set()
        for st in states:
            opened = list(st)
            # start a new bin
            cand = [tuple(sorted(opened + [(a, 1)]))]
            for k, (s, c) in enumerate(opened):
                if s + a <= B and c < 3:
                    cur = opened[:k] + opened[k + 1:]
                    if c + 1 < 3:
                        cur.append((s + a, c + 1))
                    elif s + a != B:
                        continue
                    cand.append(tuple(sorted(cur)))
            nxt.update(cand)
        states = {st for st in nxt if len(st) <= inst.n}
    return () in states
