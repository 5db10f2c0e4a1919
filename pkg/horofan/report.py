"""Itemized pass/fail reports shared by the validation and criteria modules."""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_EVALUATED = "not_evaluated"


class CheckResult(BaseModel):
    """Outcome of a single named check, with an optional witness"""

    model_config = ConfigDict(frozen=True)

    name: str
    status: CheckStatus
    witness: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS

    @classmethod
    def passing(cls, name: str) -> "CheckResult":
        return cls(name=name, status=CheckStatus.PASS)

    @classmethod
    def failing(cls, name: str, witness: Optional[str] = None) -> "CheckResult":
        return cls(name=name, status=CheckStatus.FAIL, witness=witness)

    @classmethod
    def skipped(cls, name: str, witness: Optional[str] = None) -> "CheckResult":
        return cls(name=name, status=CheckStatus.NOT_EVALUATED, witness=witness)

    @classmethod
    def of(cls, name: str, ok: bool, witness: Optional[str] = None) -> "CheckResult":
        return cls.passing(name) if ok else cls.failing(name, witness)


class ValidationReport(BaseModel):
    """A list of check results; valid when nothing failed"""

    model_config = ConfigDict(frozen=True)

    checks: Tuple[CheckResult, ...] = ()

    @property
    def violations(self) -> Tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if c.status == CheckStatus.FAIL)

    @property
    def valid(self) -> bool:
        return not self.violations

    def status_of(self, name: str) -> Optional[CheckStatus]:
        for check in self.checks:
            if check.name == name:
                return check.status
        return None

    def summary(self) -> str:
        if not self.checks:
            return "valid"
        lines = []
        for check in self.checks:
            line = f"{check.name}: {check.status.value}"
            if check.witness:
                line += f" ({check.witness})"
            lines.append(line)
        return "\n".join(lines)
