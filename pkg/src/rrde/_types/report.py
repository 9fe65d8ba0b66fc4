from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from ..errors import InvariantViolation

__all__ = ["CheckStatus", "CheckOutcome", "Report", "Summary"]

CheckStatus = Literal["pass", "fail", "expected-fail"]


class CheckOutcome(BaseModel):
    name: str
    status: CheckStatus
    value: Optional[float] = None
    threshold: Optional[float] = None
    detail: Optional[str] = None


class Report(BaseModel):
    experiment: str
    label: str
    config: Dict[str, Any] = Field(default_factory=dict)
    scalars: Dict[str, Optional[float]] = Field(default_factory=dict)
    arrays: Dict[str, List[Optional[float]]] = Field(default_factory=dict)
    checks: List[CheckOutcome] = Field(default_factory=list)
    files: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failing(self) -> List[str]:
        return [c.name for c in self.checks if c.status == "fail"]


class Summary(BaseModel):
    """Outcome of a batch: one report per configured experiment"""

    reports: List[Report]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def failing(self) -> List[str]:
        return [f"{r.label}:{name}" for r in self.reports for name in r.failing()]

    def raise_for_failures(self) -> None:
        failing = self.failing()
        if failing:
            raise InvariantViolation(", ".join(failing))
