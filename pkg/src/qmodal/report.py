"""Structured pass/fail evidence for checked laws and suites.

A :class:`CertificateReport` is a list of named entries, each carrying a
verdict and an optional counterexample payload.  Reports serialize to JSON
lines with sorted keys so that re-runs are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CheckEntry:
    """One checked law or recorded observation.

    ``passed`` is True/False for asserted laws and None for informational
    entries that record data without asserting it.
    """

    name: str
    passed: bool | None
    witness: Any = None
    frame: Any = None

    @property
    def verdict(self) -> str:
        if self.passed is None:
            return "info"
        return "pass" if self.passed else "fail"


@dataclass
class CertificateReport:
    title: str
    entries: list[CheckEntry] = field(default_factory=list)

    def add(self, name: str, passed: bool | None, witness: Any = None,
            frame: Any = None) -> None:
        self.entries.append(CheckEntry(name, passed, witness, frame))

    @property
    def passed(self) -> bool:
        """Overall verdict: every asserted entry passes."""
        return all(e.passed for e in self.entries if e.passed is not None)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if e.passed is False]

    def to_lines(self) -> list[str]:
        """Render as JSON lines, one entry per line, stable key order."""
        lines = []
        for e in self.entries:
            lines.append(json.dumps(
                {
                    "suite": self.title,
                    "frame": e.frame,
                    "entry": e.name,
                    "verdict": e.verdict,
                    "witness": e.witness,
                },
                sort_keys=True,
                separators=(", ", ": "),
            ))
        return lines

    def summary(self) -> str:
        n_fail = len(self.failures())
        n_assert = sum(1 for e in self.entries if e.passed is not None)
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{self.title}: {verdict}"
                f" ({n_assert - n_fail}/{n_assert} checks passed,"
                f" {len(self.entries) - n_assert} informational)")
