"""Verification report structures and their text/JSON/CSV renderings.

A report is a list of check results, each with a stable identifier, a
human-readable description, a status (pass, fail, or finding -- findings
never affect the exit status), an optional residual, and its timing.
Reports from identical runs are byte-identical apart from the timing
values; assembly is ordered by check id, never by completion order.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
FINDING = "finding"


@dataclass
class CheckResult:
    check_id: str
    description: str
    status: str
    residual: str | None = None
    detail: str | None = None
    seconds: float = 0.0


@dataclass
class Report:
    suite: str
    results: list[CheckResult] = field(default_factory=list)

    def sorted_results(self) -> list[CheckResult]:
        return sorted(self.results, key=lambda r: r.check_id)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if r.status == FAIL)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_json(self, include_timing: bool = True) -> str:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "checks": [
                {
                    "id": r.check_id,
                    "description": r.description,
                    "status": r.status,
                    **({"residual": r.residual} if r.residual else {}),
                    **({"detail": r.detail} if r.detail else {}),
                    **({"seconds": round(r.seconds, 6)} if include_timing else {}),
                }
                for r in self.sorted_results()
            ],
            "counts": {
                "pass": sum(1 for r in self.results if r.status == PASS),
                "fail": self.failed,
                "finding": sum(1 for r in self.results if r.status == FINDING),
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"suite {self.suite}"]
        width = max((len(r.check_id) for r in self.results), default=10)
        for r in self.sorted_results():
            mark = {"pass": "ok", "fail": "FAIL", "finding": "note"}[r.status]
            line = f"  [{mark:>4}] {r.check_id:<{width}}  {r.description}"
            if r.detail:
                line += f"  ({r.detail})"
            if r.residual:
                line += f"  residual: {r.residual}"
            lines.append(line)
        lines.append(f"  {len(self.results)} checks, {self.failed} failures")
        return "\n".join(lines)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start
        return False


def table_to_csv(header: list[str], rows: list[list]) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(str(c) for c in row))
    return "\n".join(out) + "\n"


def table_to_json(header: list[str], rows: list[list]) -> str:
    return json.dumps([dict(zip(header, row)) for row in rows], indent=2,
                      sort_keys=True)


def table_to_text(header: list[str], rows: list[list]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for row in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)
