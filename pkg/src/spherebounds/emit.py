"""Deterministic table output: CSV, JSON and a minimal self-contained SVG.

Floats are written with 17 significant digits, integers in full, and
integral fractions as integers.  The SVG places every polyline in data
coordinates under a single affine transform, so the numbers inside the
``points`` attributes are the same strings that appear in the CSV.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence
from xml.etree import ElementTree as ET

__all__ = ["Table", "Series", "Panel", "format_value", "to_csv", "to_json", "to_svg"]

PANEL_WIDTH = 800
PANEL_HEIGHT = 600
_MARGIN = 70
_COLOURS = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400")


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)

    @classmethod
    def from_records(cls, records: Sequence[dict], columns: Optional[list[str]] = None) -> "Table":
        if columns is None:
            columns = list(records[0]) if records else []
        return cls(list(columns), [[r[c] for c in columns] for r in records])

    def column(self, name: str) -> list:
        j = self.columns.index(name)
        return [row[j] for row in self.rows]


def format_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v + 0.0, ".17g")  # + 0.0 turns -0.0 into 0.0
    return str(v)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _json_value(v: Any) -> Any:
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else format_value(v)
    if isinstance(v, float) and not math.isfinite(v):
        return format_value(v)
    return v


def to_json(tables: dict[str, Table]) -> str:
    doc = {
        name: {"columns": t.columns,
               "rows": [{c: _json_value(v) for c, v in zip(t.columns, row)} for row in t.rows]}
        for name, t in tables.items()
    }
    return json.dumps(doc, indent=2) + "\n"


@dataclass
class Series:
    label: str
    xs: Sequence[float]
    ys: Sequence[float]
    dashed: bool = False


@dataclass
class Panel:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series]
    ticks: Sequence[float] = ()  # x positions marked on the axis
    markers: Sequence[tuple[float, float]] = ()  # highlighted points


def _extent(values: Sequence[float]) -> tuple[float, float]:
    finite = [v for v in values if math.isfinite(v)]
    lo, hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if hi == lo:
        hi = lo + 1.0
    return lo, hi


def _panel(root: ET.Element, panel: Panel, offset_y: int) -> None:
    svg = ET.SubElement(root, "svg", x="0", y=str(offset_y), width=str(PANEL_WIDTH),
                        height=str(PANEL_HEIGHT), viewBox=f"0 0 {PANEL_WIDTH} {PANEL_HEIGHT}")
    ET.SubElement(svg, "rect", x="0", y="0", width=str(PANEL_WIDTH), height=str(PANEL_HEIGHT),
                  style="fill:#ffffff")
    xs = [x for s in panel.series for x in s.xs]
    ys = [y for s in panel.series for y in s.ys]
    x0, x1 = _extent(xs)
    y0, y1 = _extent(ys)
    w = PANEL_WIDTH - 2 * _MARGIN
    h = PANEL_HEIGHT - 2 * _MARGIN
    sx, sy = w / (x1 - x0), h / (y1 - y0)

    def px(x):
        return _MARGIN + (x - x0) * sx

    def py(y):
        return PANEL_HEIGHT - _MARGIN - (y - y0) * sy

    title = ET.SubElement(svg, "text", x=str(PANEL_WIDTH // 2), y="30",
                          style="font:16px sans-serif;text-anchor:middle")
    title.text = panel.title
    axis_style = "stroke:#000000;stroke-width:1;fill:none"
    ET.SubElement(svg, "polyline", style=axis_style,
                  points=f"{_MARGIN},{_MARGIN} {_MARGIN},{PANEL_HEIGHT - _MARGIN} "
                         f"{PANEL_WIDTH - _MARGIN},{PANEL_HEIGHT - _MARGIN}")
    for text, x, y, anchor in (
        (panel.xlabel, PANEL_WIDTH // 2, PANEL_HEIGHT - 20, "middle"),
        (panel.ylabel, 15, PANEL_HEIGHT // 2, "start"),
        (format_value(x0), _MARGIN, PANEL_HEIGHT - _MARGIN + 35, "middle"),
        (format_value(x1), PANEL_WIDTH - _MARGIN, PANEL_HEIGHT - _MARGIN + 35, "middle"),
        (format_value(y0), _MARGIN - 5, PANEL_HEIGHT - _MARGIN, "end"),
        (format_value(y1), _MARGIN - 5, _MARGIN, "end"),
    ):
        el = ET.SubElement(svg, "text", x=str(x), y=str(y),
                           style=f"font:11px sans-serif;text-anchor:{anchor}")
        el.text = text
    for t in panel.ticks:
        if x0 <= t <= x1:
            X = format(px(t), ".6f")
            ET.SubElement(svg, "line", x1=X, x2=X, y1=str(PANEL_HEIGHT - _MARGIN),
                          y2=str(PANEL_HEIGHT - _MARGIN + 8), style="stroke:#000000;stroke-width:1")

    # data coordinates: screen = (MARGIN + (x - x0) sx, H - MARGIN - (y - y0) sy)
    tx = _MARGIN - x0 * sx
    ty = PANEL_HEIGHT - _MARGIN + y0 * sy
    g = ET.SubElement(svg, "g", transform=f"matrix({sx!r} 0 0 {-sy!r} {tx!r} {ty!r})")
    for k, s in enumerate(panel.series):
        colour = _COLOURS[k % len(_COLOURS)]
        dash = ";stroke-dasharray:6 4" if s.dashed else ""
        pts = " ".join(f"{format_value(float(x))},{format_value(float(y))}"
                       for x, y in zip(s.xs, s.ys) if math.isfinite(y))
        line = ET.SubElement(g, "polyline", points=pts,
                             style=f"fill:none;stroke:{colour};stroke-width:2{dash}")
        line.set("vector-effect", "non-scaling-stroke")
        line.set("data-label", s.label)
        legend = ET.SubElement(svg, "text", x=str(PANEL_WIDTH - _MARGIN - 10), y=str(_MARGIN + 18 * k),
                               style=f"font:12px sans-serif;text-anchor:end;fill:{colour}")
        legend.text = s.label
    for x, y in panel.markers:
        ET.SubElement(svg, "circle", cx=format(px(x), ".6f"), cy=format(py(y), ".6f"), r="3.5",
                      style="fill:#000000")


def to_svg(panels: Sequence[Panel]) -> str:
    height = PANEL_HEIGHT * len(panels)
    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(PANEL_WIDTH),
                      height=str(height), viewBox=f"0 0 {PANEL_WIDTH} {height}")
    for k, panel in enumerate(panels):
        _panel(root, panel, k * PANEL_HEIGHT)
    return ET.tostring(root, encoding="unicode") + "\n"
