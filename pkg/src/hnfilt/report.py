"""Serializing results: JSON and TSV reports, and SVG polygon plots.

Reports carry the schema string ``hn-report/1`` and never include
timestamps, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from hnfilt.engine import format_slope
from hnfilt.polygon import PolygonFn

SCHEMA = "hn-report/1"
SVG_WIDTH, SVG_HEIGHT, SVG_MARGIN = 480, 320, 48


def polygon_json(poly: PolygonFn) -> list[list]:
    return [[x, format_slope(y)] for x, y in poly.vertices]


def envelope(command: str, instance: str, results: list[dict], **extra: Any) -> dict:
    return {"schema": SCHEMA, "command": command, "instance": instance, **extra, "results": results}


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def render_tsv(header: list[str], rows: list[list[Any]]) -> str:
    lines = ["# " + SCHEMA, "\t".join(header)]
    lines += ["\t".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _cell(value: Any) -> str:
    if isinstance(value, Fraction):
        return format_slope(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def polygon_svg(poly: PolygonFn, title: str = "") -> str:
    """The polygon on a fixed 480x320 canvas with labeled axes and marked breakpoints."""
    xs = [x for x, _ in poly.vertices]
    ys = [y for _, y in poly.vertices]
    x_hi = max(max(xs), 1)
    y_lo, y_hi = min(min(ys), Fraction(0)), max(max(ys), Fraction(0))
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1, y_hi + 1
    inner_w = SVG_WIDTH - 2 * SVG_MARGIN
    inner_h = SVG_HEIGHT - 2 * SVG_MARGIN

    def sx(x) -> str:
        return f"{SVG_MARGIN + float(Fraction(x) / x_hi) * inner_w:.2f}"

    def sy(y) -> str:
        return f"{SVG_MARGIN + float((y_hi - Fraction(y)) / (y_hi - y_lo)) * inner_h:.2f}"

    path = " ".join(f"{sx(x)},{sy(y)}" for x, y in poly.vertices)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<line x1="{sx(0)}" y1="{sy(0)}" x2="{sx(x_hi)}" y2="{sy(0)}" stroke="#888"/>',
        f'<line x1="{sx(0)}" y1="{sy(y_lo)}" x2="{sx(0)}" y2="{sy(y_hi)}" stroke="#888"/>',
        f'<text x="{SVG_WIDTH - SVG_MARGIN}" y="{SVG_HEIGHT - 12}" text-anchor="end" font-size="12">rank</text>',
        f'<text x="12" y="{SVG_MARGIN - 16}" font-size="12">degree</text>',
        f'<polyline points="{path}" fill="none" stroke="black" stroke-width="2"/>',
    ]
    for x, y in poly.vertices:
        parts.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="4" fill="#c00"/>')
        parts.append(
            f'<text x="{sx(x)}" y="{float(sy(y)) - 8:.2f}" text-anchor="middle" font-size="11">'
            f"({x}, {format_slope(y)})</text>"
        )
    if title:
        parts.append(f'<text x="{SVG_WIDTH / 2:.2f}" y="20" text-anchor="middle" font-size="13">{_escape(title)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
