"""Star instances built from 3-Partition, with exact verification of their inequalities.

All radii are exact rationals.  Inequalities that involve square roots are
decided by squaring after checking signs, so every reported margin is an
exact :class:`~fractions.Fraction` (margins of squared forms are marked as
such in the check name).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .geometry import Disk, Packing, subtend_angle
from .graph import Graph
from .interval import Interval, log2_exact, sin_pi_over_pow2
from .oracle import OracleError, ThreePartitionInstance

PI_UPPER = Fraction(355, 113)
SWEEP_LIMIT = 2000
MAX_MATERIALIZED_M = 1 << 16


class ReductionError(ValueError):
    pass


class Mode(str, Enum):
    FAITHFUL = "faithful"
    DEMONSTRATION = "demo"


# ---------------------------------------------------------------- radii

def radius_fn(x, B: int) -> Fraction:
    """r(x) = 2 - (4 - 12x/B)/B, for B/4 <= x <= B/2."""
    x = Fraction(x)
    if B <= 0:
        raise ReductionError("B must be positive")
    if not Fraction(B, 4) <= x <= Fraction(B, 2):
        raise ReductionError(f"x = {x} outside [B/4, B/2] for B = {B}")
    return 2 - (4 - 12 * x / B) / B


def r_min(B: int) -> Fraction:
    return radius_fn(Fraction(B, 4) + 1, B)


def r_max(B: int) -> Fraction:
    return radius_fn(Fraction(B, 2) - 1, B)


def row_width(radii: Sequence[Fraction]) -> float:
    """Horizontal extent of disks placed tightly in a row on a line, in the given order."""
    w = float(radii[0] + radii[-1])
    for a, b in zip(radii, radii[1:]):
        w += 2 * math.sqrt(float(a * b))
    return w


def frac_json(q: Fraction) -> dict:
    with localcontext() as ctx:
        ctx.prec = 40
        dec = Decimal(q.numerator) / Decimal(q.denominator)
    return {"exact": f"{q.numerator}/{q.denominator}", "decimal": format(dec, "f")}


def frac_from_json(d) -> Fraction:
    if isinstance(d, dict):
        d = d["exact"]
    return Fraction(d)


# ---------------------------------------------------------------- padding

def pad_instance(a: ThreePartitionInstance, m: int) -> ThreePartitionInstance:
    a.validate()
    n = a.n
    if m < n:
        raise ReductionError(f"m = {m} must be at least n = {n}")
    B = a.B
    extra = m - n
    A = [180 * x for x in a.A] + [60 * B - 5] * (2 * extra) + [60 * B + 10] * extra
    out = ThreePartitionInstance(tuple(A), 180 * B)
    out.validate()
    return out


# ---------------------------------------------------------------- conditions

@dataclass(frozen=True)
class CheckResult:
    name: str
    holds: bool
    lhs: Fraction
    rhs: Fraction
    margin: Fraction
    note: str = ""

    def to_json(self) -> dict:
        out = {"holds": self.holds, "lhs": frac_json(self.lhs), "rhs": frac_json(self.rhs),
               "margin": frac_json(self.margin)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class ConditionReport:
    B: int
    checks: Dict[str, CheckResult]
    sweep: str

    @property
    def all_hold(self) -> bool:
        return all(c.holds and c.margin > 0 for c in self.checks.values())

    def to_json(self) -> dict:
        return {"B": self.B, "sweep": self.sweep, "allHold": self.all_hold,
                "checks": {k: v.to_json() for k, v in self.checks.items()}}


def _le_sqrt(name: str, lhs: Fraction, radicand: Fraction, strict: bool = False,
             note: str = "") -> CheckResult:
    """Decide lhs <= sqrt(radicand) (or <) exactly; margin is radicand - lhs^2 when lhs > 0."""
    if lhs <= 0:
        margin = radicand + lhs * lhs if lhs < 0 else radicand
        return CheckResult(name, radicand >= 0 and (margin > 0 or not strict), lhs, radicand,
                           margin, note or "left side non-positive")
    margin = radicand - lhs * lhs
    return CheckResult(name, margin > 0 if strict else margin >= 0, lhs * lhs, radicand,
                       margin, note)


def _row3_at_least(name: str, outer: Fraction, middle: Fraction, bound: Fraction,
                   strict: bool = False) -> CheckResult:
    """2*outer + 4*sqrt(outer*middle) >= bound, i.e. the width of (outer, middle, outer)."""
    # bound - 2*outer <= 4 sqrt(outer*middle)  <=>  ((bound - 2 outer)/4) <= sqrt(outer*middle)
    return _le_sqrt(name, (bound - 2 * outer) / 4, outer * middle, strict)


def _separator_margin(B: int, x: int, rm: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    """(lhs^2, rhs^2, margin) for d(16/B^2, x) <= r(x) - 1/B^2."""
    r = radius_fn(x, B)
    inv = Fraction(1, B * B)
    lhs2 = (r - 8 * inv) ** 2 + (r - rm) ** 2
    rhs = r - inv
    return lhs2, rhs * rhs, rhs * rhs - lhs2


def _sweep_check(name: str, B: int, rm: Fraction, sweep: bool) -> CheckResult:
    if sweep:
        worst = None
        for x in range(B // 4 + 1, B // 2):
            cur = _separator_margin(B, x, rm)
            if worst is None or cur[2] < worst[2]:
                worst = cur + (x,)
        lhs2, rhs2, margin, x = worst
        return CheckResult(name, margin > 0, lhs2, rhs2, margin,
                           f"squared form, exhaustive over x, worst at x = {x}")
    poly = Fraction(208 + 28 * B - 19 * B * B)
    return CheckResult(name, poly <= 0, poly, Fraction(0), -poly,
                       "sufficient polynomial 208 + 28B - 19B^2 <= 0")


def bow_saving_check(B: int, d: Optional[Fraction] = None) -> CheckResult:
    """Space saved by a bow of depth d on the (r(B/4), r(B/2), r(B/4)) row is at most 1/(4B^2)."""
    d = Fraction(1, 4 * B * B) if d is None else Fraction(d)
    r2, r4 = radius_fn(B // 2, B), radius_fn(B // 4, B)
    P = 4 * r2 * r4
    Q = (r2 + r4) ** 2 - (r2 + d - r4) ** 2
    t = Fraction(1, 8 * B * B)
    if Q < 0:
        return CheckResult("bowSaving", False, P, Q, Q, "bow deeper than the disks allow")
    # sqrt(P) - sqrt(Q) <= t  <=>  sqrt(P) - t <= sqrt(Q)
    # squared: P + t^2 - Q <= 2 t sqrt(P)
    u = P + t * t - Q
    if u <= 0:
        return CheckResult("bowSaving", True, u, Fraction(0), -u + 4 * t * t * P,
                           "squared form, trivially satisfied")
    margin = 4 * t * t * P - u * u
    return CheckResult("bowSaving", margin >= 0, u * u, 4 * t * t * P, margin,
                       "doubly squared form")


def outer_radius_m6(rho: Fraction, w: Fraction) -> float:
    """Outer radius for six gaps with separators of radius rho at distance w (float)."""
    a = 5 * rho + w
    return float(a) + math.sqrt(float(a * a - (2 * rho + w) ** 2 + 3 * rho * rho))


def outer_radius_bounds_check(B: int, w: Optional[Fraction] = None,
                              rho: Optional[Fraction] = None) -> CheckResult:
    """Six gaps is the worst case; its tight outer radius must stay below 38."""
    w = Fraction(12) + Fraction(1, 4 * B * B) if w is None else Fraction(w)
    rho = r_min(B) if rho is None else Fraction(rho)
    a = 5 * rho + w
    D = a * a - (2 * rho + w) ** 2 + 3 * rho * rho
    if 38 - a <= 0:
        return CheckResult("outerRadiusBounds", False, a, Fraction(38), 38 - a)
    margin = (38 - a) ** 2 - D
    # the flat limit 3 rho + 6 + 2 sqrt(2 rho^2 + 6 rho) is at least 6 because rho > 0
    ok = margin > 0 and rho > 0
    return CheckResult("outerRadiusBounds", ok, D, (38 - a) ** 2, min(margin, 3 * rho),
                       "squared form of k < 38; lower bound 6 holds with slack 3*r_min")


def check_feasibility_conditions(B: int, sweep_limit: int = SWEEP_LIMIT) -> ConditionReport:
    if B <= 12:
        raise ReductionError(f"B = {B} must exceed 12")
    if B % 4:
        raise ReductionError(f"B = {B} must be divisible by 4")
    inv = Fraction(1, B * B)
    rm, rM = r_min(B), r_max(B)
    r4, r2 = radius_fn(B // 4, B), radius_fn(B // 2, B)
    sweep = B <= sweep_limit
    checks = {}
    checks["cond1"] = _row3_at_least("cond1", rm, rM, 12 + 17 * inv)
    checks["cond2"] = _sweep_check("cond2", B, rm, sweep)
    checks["cond3"] = _row3_at_least("cond3", r4, r2, 12 - 24 * inv + 17 * inv)
    c4 = _sweep_check("cond4", B, rm, sweep)
    checks["cond4"] = c4
    checks["bowSaving"] = bow_saving_check(B)
    q = Fraction(1, 4 * B * B)
    infeasible = _row3_at_least("window", rm, rM, 12 + 2 * q, strict=True)
    feasible = _row3_at_least("window", r4, r2, 12 - 24 * inv + 2 * q, strict=True)
    worst = min(infeasible, feasible, key=lambda c: c.margin)
    checks["spaceWindow"] = CheckResult("spaceWindow", infeasible.holds and feasible.holds,
                                        worst.lhs, worst.rhs, worst.margin,
                                        "squared form; min over infeasible and feasible sides")
    checks["outerRadiusBounds"] = outer_radius_bounds_check(B)
    return ConditionReport(B, checks, "exhaustive" if sweep else "polynomial")


# ---------------------------------------------------------------- radii of central and outer disks

@dataclass(frozen=True)
class ReductionParams:
    B: int
    n: int
    m: int
    mode: Mode = Mode.DEMONSTRATION
    eps3: Optional[Fraction] = None
    eps4: Optional[Fraction] = None
    c1: Optional[int] = None
    c3: Optional[int] = None
    c4: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.eps3 is None:
            e3 = Fraction(1, self.B ** self.c3) if self.c3 else Fraction(1, 16 * self.B * self.B)
            object.__setattr__(self, "eps3", e3)
        if self.eps4 is None:
            e4 = Fraction(1, self.B ** self.c4) if self.c4 else Fraction(1, 128 * self.B * self.B)
            object.__setattr__(self, "eps4", e4)
        object.__setattr__(self, "eps3", Fraction(self.eps3))
        object.__setattr__(self, "eps4", Fraction(self.eps4))

    def validate(self) -> None:
        if self.B <= 12 or self.B % 4:
            raise ReductionError(f"B = {self.B} must exceed 12 and be divisible by 4")
        log2_exact(self.m)
        if self.m < self.n:
            raise ReductionError(f"m = {self.m} must be at least n = {self.n}")
        if self.m < 8:
            raise ReductionError("m must be at least 8")
        if self.eps3 <= 0 or self.eps4 <= 0:
            raise ReductionError("eps3 and eps4 must be positive")
        if self.mode is Mode.FAITHFUL:
            if self.n <= 6:
                raise ReductionError(f"faithful mode needs n > 6, got n = {self.n}")
            if self.m < m_lower_bound(self.B):
                raise ReductionError(f"faithful mode needs m >= {float(m_lower_bound(self.B)):.6g}")

    @property
    def caveat(self) -> Optional[str]:
        if self.mode is Mode.FAITHFUL:
            return None
        return ("demonstration parameters: m is far below the bound that guarantees a shallow "
                "bow, so feasible and infeasible triples are not guaranteed to be separated")

    def to_json(self) -> dict:
        return {"B": self.B, "n": self.n, "m": self.m, "mode": self.mode.value,
                "eps3": frac_json(self.eps3), "eps4": frac_json(self.eps4),
                "c1": self.c1, "c3": self.c3, "c4": self.c4}


def m_lower_bound(B: int) -> Fraction:
    """Sufficient gap count for a shallow bow, rounded up via an upper bound of pi."""
    rm = r_min(B)
    return (PI_UPPER / 6) * (Fraction(1, 8 * B * B) + 2 * B * B * (7 + rm) ** 2 - rm + 39)


def faithful_m(B: int) -> int:
    bound = m_lower_bound(B)
    m = 8
    while m < bound:
        m *= 2
    return m


def outer_radius_enclosure(B: int, m: int, bits: int = 128) -> Interval:
    """Enclosure of the outer radius leaving exactly 12 units between separators."""
    p = log2_exact(m)
    s = sin_pi_over_pow2(p, Fraction(1, 1 << bits))
    rho = Interval.point(r_min(B))
    s2 = s.square()
    rad = 2 * rho * rho + 6 * rho - 2 * rho * rho * s2 - 6 * rho * s2
    num = rho * s - 3 * rho - 6 - 2 * rad.sqrt(bits)
    return num / (s - 1)


def central_radius_enclosure(ro: Fraction, m: int, bits: int = 128) -> Interval:
    s = sin_pi_over_pow2(log2_exact(m), Fraction(1, 1 << bits))
    return Interval.point(ro) / s - ro


def _admissible(enc: Interval, eps: Fraction, bits: int) -> Interval:
    """Values v with exact < v <= exact + eps for every exact value inside ``enc``."""
    eta = Fraction(1, 1 << (bits + 2))
    lo, hi = enc.hi + eta, enc.lo + eps
    if lo > hi:
        raise ReductionError("enclosure too wide for the requested slack")
    return Interval(lo, hi)


def compute_outer_central_radii(params: ReductionParams, max_bits: int = 4096
                                ) -> Tuple[Interval, Interval]:
    """Admissible ranges for the outer and central radii.

    Every value of the first interval exceeds the exact outer radius by at most
    ``eps3``; every value of the second exceeds the exact central radius for the
    midpoint outer radius by at most ``eps4``.
    """
    log2_exact(params.m)
    if params.eps3 <= 0 or params.eps4 <= 0:
        raise ReductionError("eps3 and eps4 must be positive")
    eps = min(params.eps3, params.eps4)
    bits = 64
    while (1 << bits) * eps < 1 << 8:
        bits *= 2
    while True:
        if bits > max_bits:
            raise ReductionError(f"requested width needs more than {max_bits} bits")
        ro_enc = outer_radius_enclosure(params.B, params.m, bits)
        if ro_enc.width * 4 <= params.eps3:
            ro = _admissible(ro_enc, params.eps3, bits)
            rc_enc = central_radius_enclosure(ro.mid, params.m, bits)
            if rc_enc.width * 4 <= params.eps4:
                rc = _admissible(rc_enc, params.eps4, bits)
                break
        bits *= 2
    if ro.lo < 6 or ro.hi > 38:
        raise ReductionError(f"outer radius {float(ro.mid)} outside [6, 38]")
    return ro, rc


# ---------------------------------------------------------------- instance

@dataclass
class StarReductionInstance:
    central: Fraction
    outer: Fraction
    inputs: List[Tuple[str, int, Fraction]]
    separator: Fraction
    params: ReductionParams
    source: ThreePartitionInstance
    m: int = field(init=False)

    def __post_init__(self):
        self.m = self.params.m

    @property
    def caveat(self) -> Optional[str]:
        return self.params.caveat

    def vertex_count(self) -> int:
        return 1 + self.m + len(self.inputs) + 2 * self.m

    def exact_weights(self) -> Dict[str, Fraction]:
        w = {"c": self.central}
        for k in range(self.m):
            w[f"o{k}"] = self.outer
            w[f"s{k}a"] = self.separator
            w[f"s{k}b"] = self.separator
        for v, _, r in self.inputs:
            w[v] = r
        return w

    def graph(self) -> Graph:
        w = self.exact_weights()
        leaves = [v for v in w if v != "c"]
        return Graph(["c"] + leaves, [("c", v) for v in leaves],
                     {v: float(q) for v, q in w.items()})

    def to_json(self) -> dict:
        w = self.exact_weights()
        leaves = [v for v in w if v != "c"]
        return {
            "vertices": ["c"] + leaves,
            "edges": [["c", v] for v in leaves],
            "weights": {v: float(q) for v, q in w.items()},
            "exactWeights": {v: frac_json(q) for v, q in w.items()},
            "inputValues": {v: a for v, a, _ in self.inputs},
            "provenance": {
                "params": self.params.to_json(),
                "source": {"A": list(self.source.A), "B": self.source.B},
                "caveat": self.caveat,
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "StarReductionInstance":
        try:
            prov = data["provenance"]
            p = prov["params"]
            params = ReductionParams(p["B"], p["n"], p["m"], Mode(p["mode"]),
                                     frac_from_json(p["eps3"]), frac_from_json(p["eps4"]),
                                     p.get("c1"), p.get("c3"), p.get("c4"))
            ex = {v: frac_from_json(q) for v, q in data["exactWeights"].items()}
            vals = data["inputValues"]
            inputs = [(v, int(vals[v]), ex[v]) for v in data["vertices"] if v in vals]
            src = ThreePartitionInstance(tuple(prov["source"]["A"]), prov["source"]["B"])
            return cls(ex["c"], ex["o0"], inputs, ex["s0a"], params, src)
        except (KeyError, TypeError, ValueError) as e:
            raise ReductionError(f"malformed reduction instance: {e}") from e


def build_star_instance(a: ThreePartitionInstance, params: ReductionParams) -> StarReductionInstance:
    """Star whose leaves encode the padded instance; ``a`` is the unpadded source."""
    a.validate()
    params.validate()
    if params.mode is Mode.FAITHFUL and params.m > MAX_MATERIALIZED_M:
        raise ReductionError(f"m = {params.m} is too large to materialize; "
                             "use Demonstration mode or report-only")
    padded = pad_instance(a, params.m)
    if padded.B != params.B:
        raise ReductionError(f"params.B = {params.B} but the padded bound is {padded.B}")
    ro, rc = compute_outer_central_radii(params)
    inputs = [(f"x{i}", v, radius_fn(v, padded.B)) for i, v in enumerate(padded.A)]
    return StarReductionInstance(rc.mid, ro.mid, inputs, r_min(padded.B), params, padded)


def demo_params(a: ThreePartitionInstance, m: int, **kw) -> ReductionParams:
    return ReductionParams(180 * a.B, a.n, m, Mode.DEMONSTRATION, **kw)


def report(B: int) -> dict:
    """Report-only view for a padded bound ``B``: gap count needed and radii enclosures."""
    m = faithful_m(B)
    params = ReductionParams(B, 7, m, Mode.FAITHFUL)
    ro, rc = compute_outer_central_radii(params)
    return {"B": B, "mLowerBound": frac_json(m_lower_bound(B)), "m": m,
            "outerRadius": {"lo": frac_json(ro.lo), "hi": frac_json(ro.hi)},
            "centralRadius": {"lo": frac_json(rc.lo), "hi": frac_json(rc.hi)},
            "vertexCount": 1 + 6 * m}


# ---------------------------------------------------------------- embedding a solution

@dataclass
class GapResidual:
    gap: int
    triple: Tuple[int, int, int]
    residual: float


class EmbeddingError(ReductionError):
    def __init__(self, msg: str, residuals: List[GapResidual]):
        super().__init__(msg)
        self.residuals = residuals


def _match_partition(inst: StarReductionInstance, partition) -> List[List[Tuple[str, Fraction]]]:
    if len(partition) != inst.m:
        raise ReductionError(f"partition has {len(partition)} parts, expected {inst.m}")
    pool: Dict[int, List[Tuple[str, Fraction]]] = {}
    for v, a, r in inst.inputs:
        pool.setdefault(a, []).append((v, r))
    want = Counter(a for _, a, _ in inst.inputs)
    got = Counter()
    out = []
    for t in partition:
        if len(t) != 3:
            raise ReductionError(f"malformed partition: part {list(t)} is not a triple")
        got.update(int(x) for x in t)
    if got != want:
        raise ReductionError("malformed partition: values differ from the instance")
    for t in partition:
        out.append([pool[int(x)].pop() for x in t])
    return out


def _gap_layout(Rc: float, ro: float, inner: Sequence[float], step: float
                ) -> Tuple[List[float], float]:
    """Tight clockwise angles of ``inner`` after an outer disk at 0, and the angle left over."""
    radii = [ro] + list(inner)
    theta = [0.0]
    for i in range(1, len(radii)):
        theta.append(max(theta[j] + subtend_angle(Rc, radii[j], radii[i]) for j in range(i)))
    close = max(theta[j] + subtend_angle(Rc, radii[j], ro) for j in range(1, len(radii)))
    return theta, step - close


def triple_gap_residual(inst: StarReductionInstance, values: Sequence[int]) -> float:
    """Angle left in one gap holding two separators and the triple ``values`` (any sums allowed)."""
    B = inst.source.B
    inner = [float(inst.separator)] + [float(radius_fn(v, B)) for v in values] + [float(inst.separator)]
    return _gap_layout(float(inst.central), float(inst.outer), inner, 2 * math.pi / inst.m)[1]


def embed_solution(inst: StarReductionInstance, partition, tol: float = 1e-12,
                   check_sums: bool = True) -> Packing:
    """Place a partition: outer disks evenly spaced, each gap holding separators and one triple.

    In each gap the leaves are packed tightly clockwise from the first outer disk and
    the leftover angle is spread evenly; a negative leftover raises
    :class:`EmbeddingError` carrying every gap's residual.
    """
    groups = _match_partition(inst, partition)
    if check_sums:
        for t in partition:
            if sum(int(x) for x in t) != inst.source.B:
                raise ReductionError(f"triple {list(t)} does not sum to {inst.source.B}")
    Rc, ro, rho = float(inst.central), float(inst.outer), float(inst.separator)
    step = 2 * math.pi / inst.m
    disks = [Disk("c", 0.0, 0.0, Rc)]
    residuals: List[GapResidual] = []
    for k, group in enumerate(groups):
        seq = [(f"s{k}a", rho)] + [(v, float(r)) for v, r in group] + [(f"s{k}b", rho)]
        theta, res = _gap_layout(Rc, ro, [r for _, r in seq], step)
        residuals.append(GapResidual(k, tuple(int(x) for x in partition[k]), res))
        slack = res / (len(seq) + 1)
        base = k * step
        for i, (v, r) in enumerate(seq, start=1):
            t = base + theta[i] + i * slack
            disks.append(Disk(v, (Rc + r) * math.cos(t), -(Rc + r) * math.sin(t), r))
        disks.append(Disk(f"o{k}", (Rc + ro) * math.cos(base), -(Rc + ro) * math.sin(base), ro))
    bad = [g for g in residuals if not g.residual > 0]
    if bad:
        worst = min(bad, key=lambda g: g.residual)
        raise EmbeddingError(
            f"demonstration parameters too tight: gap {worst.gap} residual {worst.residual:.3e}",
            residuals)
    return Packing(tuple(disks), tol)
