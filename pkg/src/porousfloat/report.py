"""Pass/fail records shared by presets and the verification suite."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    measured: object
    tolerance: str
    passed: bool
    provenance: str = ""
    group: str = ""
    note: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


def within(name: str, expected: float, measured: float, tol: float, *, relative: bool = False,
           provenance: str = "", group: str = "", note: str = "") -> Check:
    """Check ``|measured - expected| <= tol`` (times ``|expected|`` when relative)."""
    bound = tol * abs(expected) if relative else tol
    ok = abs(measured - expected) <= bound
    label = f"rel {tol:g}" if relative else f"abs {tol:g}"
    return Check(name, expected, measured, label, bool(ok), provenance, group, note)


def at_most(name: str, limit: float, measured: float, *, provenance: str = "", group: str = "",
            note: str = "") -> Check:
    return Check(name, f"<= {limit:g}", measured, f"<= {limit:g}", bool(measured <= limit),
                 provenance, group, note)


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "overall": "PASS" if self.passed else "FAIL",
            "checks": [{**asdict(c), "status": c.status} for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=str) + "\n"

    def to_table(self) -> str:
        def fmt(v):
            return f"{v:.6g}" if isinstance(v, float) else str(v)

        rows = [("status", "group", "check", "expected", "measured", "tolerance", "provenance")]
        rows += [(c.status, c.group, c.name, fmt(c.expected), fmt(c.measured), c.tolerance, c.provenance)
                 for c in self.checks]
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        notes = [f"  {c.name}: {c.note}" for c in self.checks if c.note]
        if notes:
            lines += ["", "notes:"] + notes
        lines.append("")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} "
                     f"({sum(c.passed for c in self.checks)}/{len(self.checks)})")
        return "\n".join(lines)
