"""Machine-readable reports: a list of check records plus an overall verdict."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from . import __version__


def _plain(obj: Any) -> Any:
    """Convert numpy scalars, arrays, tuples and sets into JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "as_dict"):
        return _plain(obj.as_dict())
    return obj


@dataclass
class Report:
    """Records are dicts with at least ``check`` and ``passed``."""

    input: str
    records: list[dict] = field(default_factory=list)
    timings: bool = False

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.records)

    def add(self, record: dict, seconds: float | None = None) -> dict:
        rec = _plain(record)
        if "check" not in rec:
            rec["check"] = rec.get("law", "unnamed")
        rec["passed"] = bool(rec["passed"])
        if self.timings and seconds is not None:
            rec["seconds"] = round(seconds, 3)
        self.records.append(rec)
        return rec

    def extend(self, records: Iterable[dict], seconds: float | None = None) -> None:
        records = list(records)
        for r in records:
            self.add(r, seconds / max(len(records), 1) if seconds is not None else None)

    def run(self, fn: Callable[[], Any]) -> Any:
        """Call ``fn`` and add what it returns (one record or a list of them)."""
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        if isinstance(out, list):
            self.extend(out, dt)
        else:
            self.add(out, dt)
        return out

    def as_dict(self) -> dict:
        return {"tool": "buchloop", "version": __version__, "input": self.input,
                "passed": self.passed, "records": self.records}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def render(self) -> str:
        """Human-readable view of the same records."""
        lines = []
        for r in self.records:
            extra = {k: v for k, v in r.items() if k not in ("check", "passed")}
            tag = "PASS" if r["passed"] else "FAIL"
            lines.append(f"{tag} {r['check']} {json.dumps(extra, sort_keys=True)}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} ({self.input})")
        return "\n".join(lines) + "\n"
