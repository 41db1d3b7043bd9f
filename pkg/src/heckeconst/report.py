"""Report documents and their JSON / CSV encodings."""
from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .conjectures import CheckRecord
from .exactnum import INFINITE, format_rational

CSV_HEADER = ["id", "k", "m", "p", "a", "n", "computed", "predicted", "pass", "report_only", "note"]


@dataclass
class ReportDocument:
    tool_version: str
    config_echo: Dict[str, Any]
    records: List[CheckRecord]
    generated_at: Optional[str] = None

    @classmethod
    def build(cls, records: Sequence[CheckRecord], config_echo: Dict[str, Any]) -> "ReportDocument":
        return cls(
            __version__,
            config_echo,
            sorted(records, key=CheckRecord.sort_key),
            datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )

    @property
    def summary(self) -> Dict[str, int]:
        gated = [r for r in self.records if not r.report_only]
        passed = sum(r.passed for r in gated)
        return {
            "total": len(self.records),
            "passed": passed,
            "failed": len(gated) - passed,
            "reportOnly": len(self.records) - len(gated),
        }

    @property
    def all_passed(self) -> bool:
        return self.summary["failed"] == 0


def encode_value(v: Any) -> Any:
    """Orders as ints or "inf", rationals as "num/den" strings."""
    if v is None:
        return None
    if isinstance(v, float) and v == INFINITE:
        return "inf"
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, (tuple, list)):
        return [encode_value(x) for x in v]
    return str(v)


def record_to_dict(r: CheckRecord) -> Dict[str, Any]:
    return {
        "id": str(r.id),
        "point": r.point.as_dict(),
        "computed": encode_value(r.computed),
        "predicted": encode_value(r.predicted),
        "pass": bool(r.passed),
        "reportOnly": bool(r.report_only),
        "note": r.note,
    }


def to_json(doc: ReportDocument) -> str:
    body = {
        "toolVersion": doc.tool_version,
        "generatedAt": doc.generated_at,
        "configEcho": doc.config_echo,
        "summary": doc.summary,
        "records": [record_to_dict(r) for r in doc.records],
    }
    return json.dumps(body, indent=2) + "\n"


def to_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in doc.records:
        d = record_to_dict(r)
        pt = d["point"]
        w.writerow([
            d["id"], pt["k"], pt["m"], pt["p"], pt["a"], pt["n"],
            _cell(d["computed"]), _cell(d["predicted"]),
            int(d["pass"]), int(d["reportOnly"]), d["note"],
        ])
    return buf.getvalue()


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, list):
        return ";".join(str(x) for x in v)
    return v


def emit_report(doc: ReportDocument, fmt: str, path: str) -> None:
    """Write ``doc`` as json or csv; OSError propagates to the caller."""
    if fmt == "json":
        text = to_json(doc)
    elif fmt == "csv":
        text = to_csv(doc)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
