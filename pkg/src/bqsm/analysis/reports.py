"""Result record for a checked inequality."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

SIGMAS = 4.0

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_VACUOUS = "vacuous"
STATUS_HYPOTHESIS = "hypothesis-violated"


@dataclass
class BoundReport:
    """One measured quantity compared against one theoretical bound.

    Parameters
    ----------
    name : str
        Human-readable label.
    lhs, rhs : float
        Measured value and bound.
    sense : {"<=", ">="}
        Direction of the inequality ``lhs sense rhs``.
    method : {"exact", "monte-carlo", "sampled", "closed-form"}
    trials : int, optional
        Monte Carlo sample count.
    sigma : float
        Standard error of ``lhs`` (0 for exact values).
    seed : int, optional
    tolerance : float
        Absolute slack allowed on exact comparisons.
    trivial : float, optional
        Value at which the bound stops saying anything, e.g. 1 for a
        probability bounded from above. A bound at or beyond it is reported as
        non-informative.
    hypothesis_ok : bool
        False when the inputs lie outside the region where the bound is
        claimed (e.g. memory fraction at or above one half).
    extra_conditions : dict
        Named side conditions; each must hold for the report to pass.
    details : dict
        Free-form diagnostic values, serialized with the report.
    """

    name: str
    lhs: float
    rhs: float
    sense: str = "<="
    method: str = "exact"
    trials: Optional[int] = None
    sigma: float = 0.0
    seed: Optional[int] = None
    tolerance: float = 1e-9
    trivial: Optional[float] = None
    hypothesis_ok: bool = True
    extra_conditions: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sense not in ("<=", ">="):
            raise ValueError(f"unknown sense {self.sense!r}")
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)

    @property
    def margin(self) -> float:
        """Distance to violation; nonnegative when the inequality holds."""
        return self.rhs - self.lhs if self.sense == "<=" else self.lhs - self.rhs

    @property
    def allowance(self) -> float:
        return self.tolerance + SIGMAS * self.sigma

    @property
    def inequality_holds(self) -> bool:
        return self.margin + self.allowance >= 0

    @property
    def passed(self) -> bool:
        return self.inequality_holds and all(self.extra_conditions.values())

    @property
    def vacuous(self) -> bool:
        if self.trivial is None:
            return False
        return self.rhs >= self.trivial if self.sense == "<=" else self.rhs <= self.trivial

    @property
    def status(self) -> str:
        if not self.hypothesis_ok:
            return STATUS_HYPOTHESIS
        if not self.passed:
            return STATUS_FAIL
        if self.vacuous:
            return STATUS_VACUOUS
        return STATUS_PASS

    @property
    def is_failure(self) -> bool:
        """A failure that counts: the hypothesis holds and the check did not."""
        return self.status == STATUS_FAIL

    def line(self) -> str:
        stat = f" ±{self.sigma:.2g}" if self.sigma else ""
        return (
            f"{self.status.upper():<19} {self.name}: "
            f"{_fmt(self.lhs)}{stat} {self.sense} {_fmt(self.rhs)} ({self.method})"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": _clean(self.lhs),
            "rhs": _clean(self.rhs),
            "sense": self.sense,
            "margin": _clean(self.margin),
            "pass": self.passed,
            "status": self.status,
            "method": self.method,
            "trials": self.trials,
            "sigma": _clean(self.sigma),
            "seed": self.seed,
            "tolerance": self.tolerance,
            "extra_conditions": {k: bool(v) for k, v in self.extra_conditions.items()},
            "details": _clean(self.details),
        }


CSV_FIELDS = ["name", "lhs", "rhs", "sense", "margin", "pass", "status", "method", "trials", "sigma", "seed"]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _clean(v):
    """Make nested values JSON-safe and stable (numpy scalars, infinities)."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        try:
            v = v.item()
        except (ValueError, AttributeError):
            v = v.tolist()
            return _clean(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return round(v, 12)
    return v


def all_passed(reports) -> bool:
    return not any(r.is_failure for r in reports)
