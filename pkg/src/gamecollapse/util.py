"""Small shared helpers: deterministic ordering and validation reports."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Iterable


def skey(x: Any) -> tuple:
    """Total sort key over the nested ids used throughout the package.

    Ints, strings, tuples, frozensets and dataclasses can be mixed freely;
    the order is deterministic across runs (no reliance on hashing).
    """
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (2, x)
    if isinstance(x, str):
        return (3, x)
    if isinstance(x, tuple):
        return (4, len(x), tuple(skey(i) for i in x))
    if isinstance(x, (frozenset, set)):
        return (5, len(x), tuple(sorted(skey(i) for i in x)))
    if dataclasses.is_dataclass(x):
        return (6, type(x).__name__, tuple(skey(getattr(x, f.name)) for f in dataclasses.fields(x)
                                           if f.compare))
    if hasattr(x, "sort_key"):
        return (7, type(x).__name__, x.sort_key())
    raise TypeError(f"no sort key for {type(x).__name__}")


def ssorted(xs: Iterable[Any]) -> list:
    return sorted(xs, key=skey)


@dataclass
class Report:
    """Outcome of a validator: empty ``violations`` means valid."""

    subject: str
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str) -> None:
        self.violations.append(msg)

    def extend(self, other: "Report", prefix: str = "") -> None:
        self.violations.extend(prefix + v for v in other.violations)

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"{self.subject}: ok"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        lines += ["  - " + v for v in self.violations[:50]]
        if len(self.violations) > 50:
            lines.append(f"  ... {len(self.violations) - 50} more")
        return "\n".join(lines)


class ValidationError(ValueError):
    """Raised when an object fails a structural check it must pass."""

    def __init__(self, report: Report | str):
        self.report = report if isinstance(report, Report) else Report(str(report), [str(report)])
        super().__init__(str(self.report))


class TruncationError(RuntimeError):
    """A computation needed more than the configured finite truncation."""
