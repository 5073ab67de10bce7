"""SVG rendering of construction traces.

World coordinates are drawn with the y axis pointing up. The viewport covers
every traced point, the triangles, and for each line its point nearest the
centroid of the drawing, plus a 10% margin on every side; lines are clipped
to it. Each trace entry becomes one ``<g data-label="...">`` group, so the
labels in the file are exactly the labels in the trace.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Iterable, Optional, Sequence

from .construction import ConstructionTrace
from .geom_core import Line, Point, Triangle

SVG_NS = "http://www.w3.org/2000/svg"
MARGIN = 0.10

_LINE_STYLE = {"stroke": "#777777", "stroke-width": "1"}
_AXIS_STYLE = {"stroke": "#1f5fbf", "stroke-width": "1.5", "stroke-dasharray": "6 4"}
_TRIANGLE_FILL = ("#cfe3f7", "#f7dfc4")


def display_label(label: str) -> str:
    """Trace labels use ASCII quotes for primes; figures show the prime sign."""
    return label.replace("'", "′")


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Frame:
    """World bounding box with margin; its longer side is mapped onto ``size`` pixels."""

    def __init__(self, pts: Sequence[Point], size: float):
        xs = [p.x for p in pts] or [0.0]
        ys = [p.y for p in pts] or [0.0]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        w, h = x1 - x0, y1 - y0
        # a flat or single-point drawing still gets a square-ish window
        pad = max(w, h, 1e-9 * max(1.0, abs(x0), abs(y0)), 1e-300)
        if w < 1e-6 * pad:
            x0, x1, w = x0 - pad / 2, x1 + pad / 2, pad
        if h < 1e-6 * pad:
            y0, y1, h = y0 - pad / 2, y1 + pad / 2, pad
        self.x0, self.x1 = x0 - MARGIN * w, x1 + MARGIN * w
        self.y0, self.y1 = y0 - MARGIN * h, y1 + MARGIN * h
        self.k = size / max(self.x1 - self.x0, self.y1 - self.y0)
        self.width = (self.x1 - self.x0) * self.k
        self.height = (self.y1 - self.y0) * self.k

    def px(self, p: Point) -> tuple[str, str]:
        return _num((p.x - self.x0) * self.k), _num((self.y1 - p.y) * self.k)

    def clip(self, l: Line, through: Point) -> Optional[tuple[Point, Point]]:
        """Segment of ``l`` inside the window (Liang-Barsky on p + t d)."""
        d = l.direction
        lo, hi = -float("inf"), float("inf")
        for coord, dc, a, b in ((through.x, d.x, self.x0, self.x1), (through.y, d.y, self.y0, self.y1)):
            if abs(dc) < 1e-15:
                if not a <= coord <= b:
                    return None
                continue
            t0, t1 = (a - coord) / dc, (b - coord) / dc
            lo, hi = max(lo, min(t0, t1)), min(hi, max(t0, t1))
        if lo > hi:
            return None
        return through + d * lo, through + d * hi


def _nearest_on(l: Line, p: Point) -> Point:
    return p - l.normal * l.residual(p)


def render_svg(trace: ConstructionTrace, triangles: Iterable[Triangle] = (),
               title: Optional[str] = None, size: float = 800.0,
               highlight: str = "C", axis_labels: Iterable[str] = ("axis",)) -> str:
    """Return the SVG document for ``trace`` as a string."""
    triangles = list(triangles)
    axis_labels = set(axis_labels)
    pts = list(trace.points().values()) + [v for t in triangles for v in t]
    centroid = Point(sum(p.x for p in pts) / len(pts), sum(p.y for p in pts) / len(pts)) if pts else Point(0.0, 0.0)
    anchors = {label: _nearest_on(l, centroid) for label, l in trace.lines().items()}
    frame = _Frame(pts + list(anchors.values()), size)

    svg = ET.Element("svg", {
        "xmlns": SVG_NS,
        "width": _num(frame.width),
        "height": _num(frame.height),
        "viewBox": f"0 0 {_num(frame.width)} {_num(frame.height)}",
        "font-family": "serif",
        "font-size": "14",
    })
    if title:
        ET.SubElement(svg, "title").text = title
    ET.SubElement(svg, "rect", {"x": "0", "y": "0", "width": _num(frame.width),
                                "height": _num(frame.height), "fill": "white"})

    for i, tri in enumerate(triangles):
        coords = " ".join(",".join(frame.px(v)) for v in tri)
        ET.SubElement(svg, "polygon", {
            "class": "triangle " + ("source" if i == 0 else "image"),
            "points": coords,
            "fill": _TRIANGLE_FILL[i % 2],
            "fill-opacity": "0.6",
            "stroke": "#333333",
        })

    # lines under points, both in trace order
    entries = sorted(trace, key=lambda e: 0 if isinstance(e.element, Line) else 1)
    for e in entries:
        g = ET.SubElement(svg, "g", {"data-label": e.label})
        if isinstance(e.element, Line):
            g.set("class", "line")
            seg = frame.clip(e.element, anchors[e.label])
            style = _AXIS_STYLE if e.label in axis_labels else _LINE_STYLE
            if seg is None:
                tx, ty = frame.px(anchors[e.label])
            else:
                (x1, y1), (x2, y2) = frame.px(seg[0]), frame.px(seg[1])
                ET.SubElement(g, "line", {"x1": x1, "y1": y1, "x2": x2, "y2": y2, **style})
                tx, ty = frame.px(seg[0] + (seg[1] - seg[0]) * 0.92)
            text = ET.SubElement(g, "text", {"x": tx, "y": ty, "fill": style["stroke"], "font-style": "italic"})
        else:
            g.set("class", "point")
            cx, cy = frame.px(e.element)
            big = e.label == highlight
            ET.SubElement(g, "circle", {"cx": cx, "cy": cy, "r": "4.5" if big else "3",
                                        "fill": "#c0392b" if big else "black"})
            text = ET.SubElement(g, "text", {"x": _num(float(cx) + 6), "y": _num(float(cy) - 6)})
        text.text = display_label(e.label)

    ET.indent(svg)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"
