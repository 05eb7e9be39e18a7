"""Pass/fail report records shared by the verification harnesses."""

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Outcome of a single named inequality check."""
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CheckReport:
    """An ordered collection of check outcomes."""
    title: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> CheckResult:
        result = CheckResult(name=name, passed=bool(passed), detail=detail)
        self.checks.append(result)
        return result

    def extend(self, other: "CheckReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]
