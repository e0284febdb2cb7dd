"""Small diagnostic containers shared by the validators."""

from dataclasses import dataclass, field
from typing import Any, NamedTuple


@dataclass
class ValidationReport:
    """Collects every violated condition instead of failing on the first one."""

    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, kind, message):
        self.violations.append((kind, message))

    @property
    def valid(self):
        return not self.violations

    def __bool__(self):
        return self.valid

    def kinds(self):
        return {kind for kind, _ in self.violations}

    def to_dict(self):
        return {
            "valid": self.valid,
            "violations": [{"kind": k, "message": m} for k, m in self.violations],
            "notes": list(self.notes),
            "data": self.data,
        }


class Verdict(NamedTuple):
    """A boolean answer carrying supporting detail; truthiness is the answer."""

    value: bool
    note: str = ""
    detail: Any = None

    def __bool__(self):
        return bool(self.value)
