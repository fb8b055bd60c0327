"""Rate algebra: the four-equation parameter solve, repuncturing, and budgets.

Given source compression rates, link code rates, and the two correlation
capacities, the planner solves for the split fractions (a, b, c) and the
single LDPC rate R, then repunctures so the larger of the two parity
windows covers the whole parity block (min(b, c) = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasiblePlanError

_BOUND_TOL = 1e-9


@dataclass(frozen=True)
class RateTargets:
    """Design inputs: compression rates, link code rates, capacities."""

    rx1: float
    rx2: float
    rc1: float
    rc2: float
    cf: float
    cb: float

    def __post_init__(self):
        for name, v in (("rx1", self.rx1), ("rx2", self.rx2), ("rc1", self.rc1),
                        ("rc2", self.rc2), ("cf", self.cf), ("cb", self.cb)):
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1]: {v}")


@dataclass(frozen=True)
class CodePlan:
    """Split fractions and code rate.

    Encoder 1 sends the first 1/a of the information bits and the first
    1/b of the parity bits; encoder 2 sends the remaining information
    bits and the last 1/c of the parity bits of a rate-r code.
    """

    a: float
    b: float
    c: float
    r: float

    def __post_init__(self):
        if self.a < 1.0 - _BOUND_TOL:
            raise ValueError(f"a must be >= 1: {self.a}")
        if self.b < 1.0 - _BOUND_TOL:
            raise ValueError(f"b must be >= 1: {self.b}")
        if self.c < 1.0 - _BOUND_TOL:
            raise ValueError(f"c must be >= 1: {self.c}")
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"r must lie in (0, 1): {self.r}")

    @property
    def r1(self) -> float:
        """Effective per-source code rate seen by decoder 1."""
        return 1.0 / (1.0 + (1.0 / self.r - 1.0) / self.b)

    @property
    def r2(self) -> float:
        """Effective per-source code rate seen by decoder 2."""
        return 1.0 / (1.0 + (1.0 / self.r - 1.0) / self.c)


def solve_plan(targets: RateTargets) -> CodePlan:
    """Solve the four rate relations in closed form (pre-repuncture plan).

    With u = 1/a, t = 1/R - 1, K1 = 1 - (Rc1/Rc2) Cf, K2 = 1 - (Rc2/Rc1) Cb,
    A = Rx1/Rc1 and B = Rx2/Rc2 the system reduces to

        u = (A - B + 1 - K1) / (2 - K1 - K2)
        t = A - u (1 - K2)
        b = t / (t - u K2),   c = t / (t - K1 (1 - u))
    """
    k1 = 1.0 - (targets.rc1 / targets.rc2) * targets.cf
    k2 = 1.0 - (targets.rc2 / targets.rc1) * targets.cb
    big_a = targets.rx1 / targets.rc1
    big_b = targets.rx2 / targets.rc2

    denom = 2.0 - k1 - k2
    if abs(denom) < _BOUND_TOL:
        raise InfeasiblePlanError("split fraction undetermined: 2 - K1 - K2 = 0")
    u = (big_a - big_b + 1.0 - k1) / denom
    if not 0.0 < u <= 1.0 + _BOUND_TOL:
        raise InfeasiblePlanError(f"a = 1/u out of range: u = {u:.6f} not in (0, 1]")
    u = min(u, 1.0)

    t = big_a - u * (1.0 - k2)
    if t <= _BOUND_TOL:
        raise InfeasiblePlanError(f"code rate out of range: 1/R - 1 = {t:.6f} <= 0")

    db = t - u * k2
    if db <= _BOUND_TOL:
        raise InfeasiblePlanError(f"b out of range: denominator {db:.6f} <= 0")
    b = t / db
    if b < 1.0 - _BOUND_TOL:
        raise InfeasiblePlanError(f"b out of range: {b:.6f} < 1")

    dc = t - k1 * (1.0 - u)
    if dc <= _BOUND_TOL:
        raise InfeasiblePlanError(f"c out of range: denominator {dc:.6f} <= 0")
    c = t / dc
    if c < 1.0 - _BOUND_TOL:
        raise InfeasiblePlanError(f"c out of range: {c:.6f} < 1")

    return CodePlan(a=1.0 / u, b=max(b, 1.0), c=max(c, 1.0), r=1.0 / (1.0 + t))


def eq1_residuals(targets: RateTargets, plan: CodePlan) -> np.ndarray:
    """Residuals of the four defining relations; all zero for a valid solve."""
    a, b, c, r = plan.a, plan.b, plan.c, plan.r
    t = 1.0 / r - 1.0
    return np.array([
        (1.0 - 1.0 / c) * t - (1.0 - (targets.rc1 / targets.rc2) * targets.cf) * (1.0 - 1.0 / a),
        (1.0 - 1.0 / b) * t - (1.0 / a) * (1.0 - (targets.rc2 / targets.rc1) * targets.cb),
        targets.rx1 - targets.rc1 * (1.0 / a + t / b),
        targets.rx2 - targets.rc2 * (1.0 - 1.0 / a + t / c),
    ])


def repuncture(plan: CodePlan) -> CodePlan:
    """Shrink the parity block to the larger window actually used.

    R' = R / (R + max((1-R)/b, (1-R)/c)); b and c rescale by
    R(1-R')/(R'(1-R)) so per-encoder transmitted bit counts are
    unchanged and min(b, c) becomes 1.
    """
    r = plan.r
    spread = max((1.0 - r) / plan.b, (1.0 - r) / plan.c)
    r_new = r / (r + spread)
    scale = r * (1.0 - r_new) / (r_new * (1.0 - r))
    return CodePlan(a=plan.a, b=max(plan.b * scale, 1.0), c=max(plan.c * scale, 1.0), r=r_new)


def sw_plan(ra: float, rb: float, cf: float, cb: float) -> CodePlan:
    """Source-coding special case: both links noiseless (Rc1 = Rc2 = 1).

    Runs the same two-step pipeline (solve then repuncture) and returns
    the final plan.
    """
    return repuncture(solve_plan(RateTargets(rx1=ra, rx2=rb, rc1=1.0, rc2=1.0, cf=cf, cb=cb)))


def parity_budget(k: int, targets: RateTargets) -> tuple[float, float]:
    """Source-parity and channel-parity totals for k-bit sources.

    P1 + P2 = k (Rx1 + Rx2 - 1)
    P3 + P4 = k [Rx1 (1/Rc1 - 1) + Rx2 (1/Rc2 - 1)]
    """
    if k < 1:
        raise ValueError(f"k must be >= 1: {k}")
    if targets.rx1 + targets.rx2 < 1.0:
        raise InfeasiblePlanError(
            f"source parity budget negative: Rx1 + Rx2 = {targets.rx1 + targets.rx2:.6f} < 1"
        )
    p12 = k * (targets.rx1 + targets.rx2 - 1.0)
    p34 = k * (targets.rx1 * (1.0 / targets.rc1 - 1.0) + targets.rx2 * (1.0 / targets.rc2 - 1.0))
    return p12, p34


def check_sw_region(rx1: float, rx2: float, h_x_given_y: float,
                    h_y_given_x: float, h_xy: float) -> list[str]:
    """Names of the admissibility bounds the rate pair violates (empty = ok)."""
    if h_x_given_y > h_xy or h_y_given_x > h_xy:
        raise ValueError("conditional entropies exceed the joint entropy")
    violations = []
    if rx1 < h_x_given_y:
        violations.append(f"rx1 = {rx1:.6f} < H(X|Y) = {h_x_given_y:.6f}")
    if rx2 < h_y_given_x:
        violations.append(f"rx2 = {rx2:.6f} < H(Y|X) = {h_y_given_x:.6f}")
    if rx1 + rx2 < h_xy:
        violations.append(f"rx1 + rx2 = {rx1 + rx2:.6f} < H(X,Y) = {h_xy:.6f}")
    return violations


def ratio_invariance_check(targets: RateTargets, plan: CodePlan) -> tuple[float, float]:
    """Residuals (R2/C2 - R/C, R1/C1 - R/C) of the rate/capacity ratios.

    The effective punctured code each decoder sees keeps the same
    rate-to-capacity ratio as the unpunctured design; both residuals
    vanish for any plan solving the rate relations (pre-repuncture).
    """
    a, r = plan.a, plan.r
    rc1, rc2, cf, cb = targets.rc1, targets.rc2, targets.cf, targets.cb

    r2 = plan.r2
    c2 = (1.0 - r2) * rc2 + r2 * rc2 * (1.0 - 1.0 / a) + (r2 / a) * cf * rc1
    c_fwd = (1.0 - r) * rc2 + r * cf * rc1
    res2 = r2 / c2 - r / c_fwd

    r1 = plan.r1
    c1 = (1.0 - r1) * rc1 + r1 * (1.0 - 1.0 / a) * cb * rc2 + rc1 * r1 / a
    c_bwd = (1.0 - r) * rc1 + r * cb * rc2
    res1 = r1 / c1 - r / c_bwd

    return float(res2), float(res1)
