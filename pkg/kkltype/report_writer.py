"""
Report output.

rows:        a CSV table with a fixed header, one line per report. The first column is the
             format version. Numbers carry 17 significant digits; infinities print as "inf".
structured:  a JSON document {"format_version": 1, "reports": [...]} with one object per report
             (name, status, lhs, rhs, constant, slack, pass, inputs, flags, extras). Non-finite
             numbers are written as the strings "inf" / "-inf" so the document stays valid JSON.
"""
import csv
import io
import json
import math
import sys
from typing import Any, Iterable, List, Optional, Sequence, TextIO

from .errors import DomainError
from .log_config import get_logger
from .reports import InequalityReport

logger = get_logger(__name__)

REPORT_FORMAT_VERSION = 1
ROW_HEADER = ("format_version", "name", "status", "lhs", "rhs", "constant", "slack", "pass", "inputs", "flags")


def format_number(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.17g}"


def _format_inputs(inputs) -> str:
    parts = []
    for key, value in inputs.items():
        text = format_number(value) if isinstance(value, (int, float)) else str(value)
        parts.append(f"{key}={text}")
    return ";".join(parts)


def rows_text(reports: Sequence[InequalityReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(ROW_HEADER)
    for report in reports:
        writer.writerow([
            REPORT_FORMAT_VERSION,
            report.name,
            report.status.value,
            format_number(report.lhs),
            format_number(report.rhs),
            format_number(report.constant_used),
            format_number(report.slack),
            format_number(report.passed),
            _format_inputs(report.inputs),
            "+".join(report.flags),
        ])
    return buffer.getvalue()


def _finite_json(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return format_number(value)
    if isinstance(value, dict):
        return {k: _finite_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_json(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return _finite_json(value.item())
    return value


def structured_text(reports: Sequence[InequalityReport]) -> str:
    document = {"format_version": REPORT_FORMAT_VERSION, "reports": [_finite_json(r.to_dict()) for r in reports]}
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def render_reports(reports: Sequence[InequalityReport], fmt: str = "rows") -> str:
    if fmt == "rows":
        return rows_text(reports)
    if fmt == "structured":
        return structured_text(reports)
    raise DomainError(f"Unknown report format '{fmt}' (expected 'rows' or 'structured').")


def emit_report(reports: Iterable[InequalityReport], fmt: str = "rows",
                path: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    """Write reports to path, or to stream (stdout by default)."""
    reports: List[InequalityReport] = list(reports)
    text = render_reports(reports, fmt)
    if path:
        with open(path, "w") as handle:
            handle.write(text)
        logger.info(f"Wrote {len(reports)} report(s) to {path}")
    else:
        target = stream or sys.stdout
        target.write(text)
        target.flush()
