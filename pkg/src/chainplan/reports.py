"""Timeline CSV emission/parsing and self-contained SVG charts.

SVG output is hand-built from primitives so repeated runs are byte-identical;
there are no timestamps, random ids, or external references in the files.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Sequence

from .simulate import ComparisonReport, TimelineRecord

TIMELINE_COLUMNS = (
    "t",
    "theta_cur_gbps",
    "policy",
    "smartnic_util",
    "cpu_util",
    "crossings",
    "latency_us",
    "max_throughput_gbps",
    "migrations_this_step",
    "cumulative_migrations",
    "outcome",
)


def timeline_to_csv(records: Sequence[TimelineRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TIMELINE_COLUMNS)
    for r in records:
        writer.writerow(
            [
                repr(r.t),
                repr(r.theta_cur),
                r.policy,
                repr(r.smartnic_util),
                repr(r.cpu_util),
                r.crossings,
                repr(r.latency_us),
                repr(r.max_throughput_gbps),
                ";".join(r.migrations_this_step),
                r.cumulative_migrations,
                r.outcome,
            ]
        )
    return out.getvalue()


def parse_timeline_csv(text: str) -> tuple[TimelineRecord, ...]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != TIMELINE_COLUMNS:
        raise ValueError(f"timeline header must be {','.join(TIMELINE_COLUMNS)}")
    records = []
    for row in rows[1:]:
        if not row:
            continue
        records.append(
            TimelineRecord(
                t=float(row[0]),
                theta_cur=float(row[1]),
                policy=row[2],
                smartnic_util=float(row[3]),
                cpu_util=float(row[4]),
                crossings=int(row[5]),
                latency_us=float(row[6]),
                max_throughput_gbps=float(row[7]),
                migrations_this_step=tuple(x for x in row[8].split(";") if x),
                cumulative_migrations=int(row[9]),
                outcome=row[10],
            )
        )
    return tuple(records)


def emit_report(data, format: str, path: str | Path) -> None:
    """Write a timeline (csv or svg) or a comparison report (svg) to `path`."""
    if format == "csv":
        if not _is_timeline(data):
            raise ValueError("csv output is only defined for timeline records")
        content = timeline_to_csv(data)
    elif format == "svg":
        if _is_timeline(data):
            content = timeline_svg(data)
        elif isinstance(data, ComparisonReport):
            content = comparison_svg(data)
        else:
            raise ValueError(f"cannot chart object of type {type(data).__name__}")
    else:
        raise ValueError(f"unknown report format {format!r}")
    Path(path).write_text(content)


def _is_timeline(data) -> bool:
    return isinstance(data, (list, tuple)) and all(
        isinstance(r, TimelineRecord) for r in data
    )


# ---------------------------------------------------------------------------
# SVG primitives

_W = 640
_PANEL_H = 260
_ML, _MR, _MT, _MB = 70, 20, 40, 40
_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _text(x: float, y: float, s: str, size: int = 12, anchor: str = "start") -> str:
    return (
        f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif" '
        f'font-size="{size}" text-anchor="{anchor}">{s}</text>'
    )


def _axis_box(top: float) -> tuple[str, float, float, float, float]:
    x0, x1 = _ML, _W - _MR
    y0, y1 = top + _MT, top + _PANEL_H - _MB
    box = (
        f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    return box, x0, x1, y0, y1


def _span(values: Sequence[float], zero_floor: bool) -> tuple[float, float]:
    lo = min(values)
    hi = max(values)
    if zero_floor:
        lo = min(0.0, lo)
    if hi == lo:
        hi = lo + 1.0
    return lo, hi


def _line_panel(
    top: float, title: str, xs: Sequence[float], ys: Sequence[float], y_label: str
) -> str:
    box, x0, x1, y0, y1 = _axis_box(top)
    xlo, xhi = _span(xs, zero_floor=False)
    ylo, yhi = _span(ys, zero_floor=True)

    def sx(x: float) -> float:
        return x0 + (x - xlo) / (xhi - xlo) * (x1 - x0)

    def sy(y: float) -> float:
        return y1 - (y - ylo) / (yhi - ylo) * (y1 - y0)

    points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(xs, ys))
    parts = [box, _text(x0, top + _MT - 10, title, size=14)]
    if len(xs) > 1:
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{_SERIES_COLORS[0]}" stroke-width="2"/>'
        )
    for x, y in zip(xs, ys):
        parts.append(
            f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="3" fill="{_SERIES_COLORS[0]}"/>'
        )
    parts.append(_text(x0 - 8, y1 + 4, _fmt(ylo), anchor="end"))
    parts.append(_text(x0 - 8, y0 + 4, _fmt(yhi), anchor="end"))
    parts.append(_text(x0, y1 + 16, _fmt(xlo)))
    parts.append(_text(x1, y1 + 16, _fmt(xhi), anchor="end"))
    parts.append(_text(x0 - 8, y0 - 10, y_label, anchor="end"))
    parts.append(_text((x0 + x1) / 2, y1 + 32, "t (s)", anchor="middle"))
    return "\n".join(parts)


def _bar_panel(
    top: float, title: str, labels: Sequence[str], values: Sequence[float], y_label: str
) -> str:
    box, x0, x1, y0, y1 = _axis_box(top)
    ylo, yhi = _span(values, zero_floor=True)

    def sy(y: float) -> float:
        return y1 - (y - ylo) / (yhi - ylo) * (y1 - y0)

    n = len(values)
    slot = (x1 - x0) / n
    width = slot * 0.6
    parts = [box, _text(x0, top + _MT - 10, title, size=14)]
    for i, (label, value) in enumerate(zip(labels, values)):
        bx = x0 + i * slot + (slot - width) / 2
        by = sy(value)
        color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
        parts.append(
            f'<rect x="{_fmt(bx)}" y="{_fmt(by)}" width="{_fmt(width)}" '
            f'height="{_fmt(y1 - by)}" fill="{color}"/>'
        )
        parts.append(_text(bx + width / 2, by - 5, _fmt(value), anchor="middle"))
        parts.append(_text(bx + width / 2, y1 + 16, label, anchor="middle"))
    parts.append(_text(x0 - 8, y0 - 10, y_label, anchor="end"))
    return "\n".join(parts)


def _document(parts: Sequence[str]) -> str:
    height = _PANEL_H * len(parts)
    body = "\n".join(parts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{height}" '
        f'viewBox="0 0 {_W} {height}">\n{body}\n</svg>\n'
    )


def timeline_svg(records: Sequence[TimelineRecord]) -> str:
    """Latency and throughput over the trace for one policy."""
    if not records:
        raise ValueError("no records to chart")
    policy = records[0].policy
    xs = [r.t for r in records]
    return _document(
        [
            _line_panel(
                0, f"latency ({policy})", xs, [r.latency_us for r in records], "us"
            ),
            _line_panel(
                _PANEL_H,
                f"max throughput ({policy})",
                xs,
                [r.max_throughput_gbps for r in records],
                "Gbps",
            ),
        ]
    )


def comparison_svg(report: ComparisonReport) -> str:
    """Before/after bars for each policy: latency on top, throughput below."""
    labels = ("before", "naive", "pam")
    latencies = (
        report.pam.latency_before_us,
        report.naive.latency_after_us,
        report.pam.latency_after_us,
    )
    throughputs = (
        report.pam.max_throughput_before_gbps,
        report.naive.max_throughput_after_gbps,
        report.pam.max_throughput_after_gbps,
    )
    return _document(
        [
            _bar_panel(0, "latency after migration", labels, latencies, "us"),
            _bar_panel(_PANEL_H, "max throughput after migration", labels, throughputs, "Gbps"),
        ]
    )
