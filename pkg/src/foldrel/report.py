"""Command reports and their text / CSV / JSON renderings.

Floats are written with ``repr`` (shortest string that parses back to the
same double) so output is both lossless and byte-stable.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from foldrel import __version__

CSV_FORMAT_VERSION = 1


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    # Non-canonical checks document known discrepancies; they never set the exit code.
    canonical: bool = True


@dataclass
class Report:
    command: str
    inputs: dict
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    summary: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    version: str = __version__

    def check(self, name: str, passed: bool, detail: str = "", canonical: bool = True) -> None:
        self.checks.append(Check(name, bool(passed), detail, canonical))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.canonical)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "inputs": _jsonable(self.inputs),
            "summary": list(self.summary),
            "columns": list(self.columns),
            "rows": [_jsonable(r) for r in self.rows],
            "checks": [
                {"name": c.name, "passed": c.passed, "canonical": c.canonical, "detail": c.detail}
                for c in self.checks
            ],
            "passed": self.passed,
        }

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_dict(), indent=2, allow_nan=True) + "\n"
        if fmt == "csv":
            return self._csv()
        return self._text()

    def _text(self) -> str:
        out = [f"foldrel {self.version} {self.command}"]
        out.extend(self.summary)
        if self.rows:
            out.append(format_csv(self.columns, self.rows, header_comment=None).rstrip("\n"))
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            if not c.canonical:
                tag = "NOTE " + tag
            out.append(f"{tag} {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(out) + "\n"

    def _csv(self) -> str:
        body = format_csv(self.columns, self.rows, header_comment=f"foldrel-{self.command}")
        trailer = "".join(
            f"# check,{c.name},{'PASS' if c.passed else 'FAIL'}{'' if c.canonical else ',note'}\n"
            for c in self.checks
        )
        return body + trailer


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "item"):  # numpy scalar
        return format_value(v.item())
    return str(v)


def format_csv(columns, rows, header_comment: str | None = "foldrel") -> str:
    buf = io.StringIO()
    if header_comment:
        buf.write(f"# {header_comment} csv v{CSV_FORMAT_VERSION}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format_value(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "item"):
        return obj.item()
    return obj
