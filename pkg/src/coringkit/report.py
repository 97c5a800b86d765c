from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError


@dataclass(frozen=True)
class Violation:
    axiom: str
    where: tuple = ()
    detail: str = ""

    def to_json(self):
        return {"axiom": self.axiom, "where": list(self.where), "detail": self.detail}


@dataclass
class ValidationReport:
    """Outcome of an exact axiom check. ``checked`` lists every axiom tested."""

    subject: str
    checked: list[str] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    @property
    def axioms_violated(self) -> list[str]:
        seen = []
        for v in self.violations:
            if v.axiom not in seen:
                seen.append(v.axiom)
        return seen

    def check(self, axiom: str, failures) -> None:
        """Record ``axiom`` as tested; ``failures`` is an iterable of locations."""
        self.checked.append(axiom)
        for where in failures:
            if not isinstance(where, tuple):
                where = (where,)
            self.violations.append(Violation(axiom, tuple(int(w) if hasattr(w, "__index__") else w for w in where)))

    def fail(self, axiom: str, detail: str = "", where=()) -> None:
        if axiom not in self.checked:
            self.checked.append(axiom)
        self.violations.append(Violation(axiom, tuple(where), detail))

    def merge(self, other: "ValidationReport", prefix: str = "") -> None:
        for a in other.checked:
            self.checked.append(prefix + a)
        for v in other.violations:
            self.violations.append(Violation(prefix + v.axiom, v.where, v.detail))

    def raise_if_invalid(self) -> "ValidationReport":
        if self.violations:
            first = self.violations[0]
            raise PreconditionError(
                f"{self.subject}: axiom '{first.axiom}' fails at {first.where}",
                axiom=first.axiom,
                report=self,
            )
        return self

    def to_json(self):
        return {
            "subject": self.subject,
            "valid": self.ok,
            "checked": list(self.checked),
            "violations": [v.to_json() for v in self.violations],
        }
