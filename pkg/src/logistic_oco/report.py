"""Machine-readable verification reports.

Each check serializes to one line::

    name=<name> value=<value> threshold=<threshold> relation=<op> status=<pass|fail>
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field

_RELATIONS = {
    "<=": operator.le,
    ">=": operator.ge,
    "<": operator.lt,
    ">": operator.gt,
}


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        return bool(_RELATIONS[self.relation](self.value, self.threshold))

    def to_line(self) -> str:
        status = "pass" if self.passed else "fail"
        return (
            f"name={self.name} value={self.value:.12g} threshold={self.threshold:.12g} "
            f"relation={self.relation} status={status}"
        )


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, value: float, threshold: float, relation: str = "<=") -> Check:
        if relation not in _RELATIONS:
            raise ValueError(f"unknown relation {relation!r}")
        check = Check(name, float(value), float(threshold), relation)
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_text(self) -> str:
        return "\n".join(c.to_line() for c in self.checks) + "\n"


def parse_report(text: str) -> list[dict[str, str]]:
    """Parse the lines written by :meth:`Report.to_text` back into dicts."""
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        rows.append(dict(tok.split("=", 1) for tok in line.split()))
    return rows
