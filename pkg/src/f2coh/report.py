"""Deterministic check reports.

A report is an ordered list of named checks, each carrying a status, a
small payload of numbers or strings, and a free-text note.  Rendering
is stable: two runs over the same input produce byte-identical text and
JSON.  Nothing time- or environment-dependent may enter a payload.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["STATUSES", "CheckResult", "Report"]

STATUSES = ("pass", "fail", "assumed", "edge-excluded")


@dataclass(frozen=True)
class CheckResult:
    """One named check with its verdict.

    ``assumed`` marks an input taken on trust rather than verified;
    ``edge-excluded`` marks a comparison skipped because the degrees in
    question fall outside the verifiable window.  Neither counts as a
    failure.
    """

    name: str
    status: str
    payload: tuple[tuple[str, object], ...] = ()
    note: str = ""

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}; one of {STATUSES}")

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def _payload(items: dict | None) -> tuple[tuple[str, object], ...]:
    if not items:
        return ()
    return tuple((str(k), v) for k, v in items.items())


def _fmt_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return ", ".join(str(x) for x in v)
    return str(v)


@dataclass
class Report:
    """Ordered collection of checks plus context lines for the header."""

    title: str
    context: tuple[tuple[str, object], ...] = ()
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, status: str, payload: dict | None = None,
            note: str = "") -> CheckResult:
        if any(c.name == name for c in self.checks):
            raise ValueError(f"duplicate check name {name!r}")
        result = CheckResult(name, status, _payload(payload), note)
        self.checks.append(result)
        return result

    def ok(self, name: str, payload: dict | None = None, note: str = "") -> CheckResult:
        return self.add(name, "pass", payload, note)

    def fail(self, name: str, payload: dict | None = None, note: str = "") -> CheckResult:
        return self.add(name, "fail", payload, note)

    def assumed(self, name: str, payload: dict | None = None, note: str = "") -> CheckResult:
        return self.add(name, "assumed", payload, note)

    @property
    def all_passed(self) -> bool:
        return not any(c.failed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.all_passed else 1

    def counts(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for c in self.checks:
            out[c.status] += 1
        return {s: n for s, n in out.items() if n}

    # -- rendering ----------------------------------------------------------

    def render_text(self) -> str:
        lines = [self.title]
        for key, value in self.context:
            lines.append(f"  {key}: {_fmt_value(value)}")
        lines.append("")

        name_w = max((len(c.name) for c in self.checks), default=4)
        name_w = max(name_w, len("check"))
        stat_w = max(len(s) for s in STATUSES)
        lines.append(f"{'check'.ljust(name_w)}  {'status'.ljust(stat_w)}  detail")
        lines.append(f"{'-' * name_w}  {'-' * stat_w}  {'-' * 30}")
        for c in self.checks:
            lines.append(f"{c.name.ljust(name_w)}  {c.status.ljust(stat_w)}  {c.note}")
            for key, value in c.payload:
                lines.append(f"{''.ljust(name_w)}  {''.ljust(stat_w)}    "
                             f"{key}: {_fmt_value(value)}")
        lines.append("")
        summary = ", ".join(f"{n} {s}" for s, n in self.counts().items())
        verdict = "PASS" if self.all_passed else "FAIL"
        lines.append(f"{verdict} ({summary or 'no checks'})")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "context": {str(k): v for k, v in self.context},
            "checks": [
                {
                    "name": c.name,
                    "status": c.status,
                    "payload": {k: (list(v) if isinstance(v, tuple) else v)
                                for k, v in c.payload},
                    "note": c.note,
                }
                for c in self.checks
            ],
            "counts": self.counts(),
            "all_passed": self.all_passed,
        }

    def render_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"
