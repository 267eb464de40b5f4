"""Uniform pass/fail reporting shared by the checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    subject: str
    ok: bool
    witness: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        tail = f"  witness: {self.witness}" if (self.witness and not self.ok) else ""
        return f"{self.name} [{self.subject}]: {verdict}{tail}"


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, subject: str, ok: bool, witness: str = "") -> "Report":
        self.checks.append(Check(name, subject, ok, witness))
        return self

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def lines(self):
        out = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        out.extend("  " + c.line() for c in self.checks)
        return out

    def to_json(self):
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "subject": c.subject, "ok": c.ok, "witness": c.witness}
                for c in self.checks
            ],
        }
