"""Result records shared by the verification routines and the harness."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

SCHEMA_VERSION = 1

PAPER, DERIVED, TRIVIAL = "PAPER", "DERIVED", "TRIVIAL"


@dataclass
class EstimateReport:
    """Point estimate with its Monte Carlo error and the rule it is judged by.

    ``passed`` is recomputable from the other fields: for ``rule="abs"``
    it is ``|estimate - target| <= tolerance``; for ``rule="pvalue"`` the
    estimate is a p-value and the check is ``estimate >= tolerance``; for
    ``rule="le"`` it is ``estimate <= target + tolerance``.
    """

    statistic: str
    estimate: float
    std_error: float = float("nan")
    n_replicates: int = 0
    target: float = float("nan")
    provenance: str = DERIVED
    tolerance: float = float("nan")
    rule: str = "abs"
    passed: Optional[bool] = None
    runtime: float = 0.0
    seed: Optional[int] = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.passed is None:
            self.passed = self.check()

    def check(self) -> bool:
        if self.rule == "pvalue":
            return bool(self.estimate >= self.tolerance)
        if self.rule == "le":
            return bool(self.estimate <= self.target + self.tolerance)
        if self.rule == "flag":
            return bool(self.estimate)
        return bool(abs(self.estimate - self.target) <= self.tolerance)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        for k, v in list(d.items()):
            if isinstance(v, float) and not math.isfinite(v):
                d[k] = None
        return d

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (
            f"[{mark}] {self.statistic}: estimate={self.estimate:.6g} "
            f"target={self.target:.6g} tol={self.tolerance:.3g} ({self.rule}, {self.provenance})"
        )
