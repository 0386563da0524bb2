"""The uniform result record returned by every inequality check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Optional

from .numerics import Mode, Scalar, scalar_mode

HOLDS = "holds"
EQUALITY = "equality"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"
VERDICTS = (HOLDS, EQUALITY, VIOLATED, INCONCLUSIVE)

DEFAULT_REL_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    """One evaluated inequality, oriented so that ``margin = rhs - lhs >= 0`` means it holds."""

    check_id: str
    lhs: Scalar
    rhs: Scalar
    margin: Scalar
    mode: Mode
    tolerance: float
    verdict: str
    witness: dict = field(default_factory=dict)
    seed: Optional[int] = None
    reason: str = ""
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict in (HOLDS, EQUALITY)

    def with_witness(self, witness: dict, seed: Optional[int] = None) -> "CheckResult":
        return replace(self, witness=witness, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "mode": self.mode.value,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "reason": self.reason,
            "details": self.details,
            "witness": self.witness,
            "seed": self.seed,
        }


def verdict_for(margin: Scalar, mode: Mode, tolerance: float) -> str:
    if mode is Mode.EXACT:
        if margin > 0:
            return HOLDS
        return EQUALITY if margin == 0 else VIOLATED
    if math.isnan(margin):
        return INCONCLUSIVE
    if margin == 0.0:
        return EQUALITY
    if abs(margin) <= tolerance:
        return INCONCLUSIVE
    return HOLDS if margin > 0 else VIOLATED


def judge(
    check_id: str,
    lhs: Scalar,
    rhs: Scalar,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    mode: Optional[Mode] = None,
    details: Optional[dict] = None,
    reason: str = "",
) -> CheckResult:
    """Build a :class:`CheckResult` for the inequality ``lhs <= rhs``.

    The mode is exact only when both sides are exact; float tolerances are
    ``rel_tol`` times the larger side.
    """
    if mode is None:
        exact = scalar_mode(lhs) is Mode.EXACT and scalar_mode(rhs) is Mode.EXACT
        mode = Mode.EXACT if exact else Mode.FLOAT
    if mode is Mode.EXACT:
        lhs, rhs = Fraction(lhs), Fraction(rhs)
        margin = rhs - lhs
        tol = 0.0
    else:
        lhs, rhs = float(lhs), float(rhs)
        margin = rhs - lhs
        tol = rel_tol * max(abs(lhs), abs(rhs))
    return CheckResult(
        check_id=check_id,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        mode=mode,
        tolerance=tol,
        verdict=verdict_for(margin, mode, tol),
        reason=reason,
        details=details or {},
    )


def inconclusive(check_id: str, reason: str, mode: Mode = Mode.FLOAT, details=None) -> CheckResult:
    """Result for degenerate inputs where the inequality is undefined."""
    z = Fraction(0) if mode is Mode.EXACT else 0.0
    return CheckResult(
        check_id=check_id,
        lhs=z,
        rhs=z,
        margin=z,
        mode=mode,
        tolerance=0.0,
        verdict=INCONCLUSIVE,
        reason=reason,
        details=details or {},
    )
