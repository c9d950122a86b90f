"""Check reports shared by every module and by the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
UNKNOWN = "unknown"
STATUSES = (PASS, FAIL, UNKNOWN)


@dataclass
class Entry:
    name: str
    status: str
    detail: str = ""
    witness: Any = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Entry":
        return cls(data["name"], data["status"], data.get("detail", ""), data.get("witness"))


@dataclass
class Report:
    """An ordered list of named check results.

    The overall status is ``fail`` if any entry failed, ``pass`` if every
    entry passed, and ``unknown`` otherwise.  Truthiness is ``status == pass``.
    """

    title: str
    entries: list = field(default_factory=list)

    def add(self, name: str, ok: bool | None, detail: str = "", witness: Any = None) -> Entry:
        status = UNKNOWN if ok is None else (PASS if ok else FAIL)
        entry = Entry(name, status, detail, _jsonable(witness))
        self.entries.append(entry)
        return entry

    def extend(self, other: "Report", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(Entry(prefix + e.name, e.status, e.detail, e.witness))

    @property
    def status(self) -> str:
        statuses = {e.status for e in self.entries}
        if FAIL in statuses:
            return FAIL
        if UNKNOWN in statuses:
            return UNKNOWN
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.passed

    @property
    def first_failure(self) -> Entry | None:
        return next((e for e in self.entries if e.status == FAIL), None)

    def failures(self) -> list:
        return [e for e in self.entries if e.status == FAIL]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "status": self.status,
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(data["title"], [Entry.from_dict(e) for e in data.get("entries", [])])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def render_text(self) -> str:
        lines = [f"{self.title}: {self.status.upper()}"]
        for e in self.entries:
            line = f"  [{e.status.upper():7}] {e.name}"
            if e.detail:
                line += f" -- {e.detail}"
            lines.append(line)
            if e.witness is not None and e.status != PASS:
                lines.append(f"            witness: {json.dumps(e.witness, sort_keys=True)}")
        return "\n".join(lines)

    def __str__(self):
        return self.render_text()


def _jsonable(x: Any) -> Any:
    """Convert tuples, sets and numpy scalars into plain JSON values."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return int(x)
    if isinstance(x, float):
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (set, frozenset)):
        return [_jsonable(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return str(x)
