"""Minimal deterministic SVG canvas and axis mapping.

Coordinates are written with two fixed decimals and every style value is a
constant, so identical inputs render byte-identical files.  No external
plotting library: the figures only need frames, ticks, polylines, markers,
and text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

FONT = "DejaVu Sans, Helvetica, sans-serif"

SERIES_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#17becf",
                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")

OVERLAY_COLOR = "#cc0000"

FRAME_COLOR = "#444444"
GRID_COLOR = "#dddddd"
TEXT_COLOR = "#222222"


def fmt(value: float) -> str:
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


def pad_range(values, fraction=0.05) -> tuple[float, float]:
    lo = min(values)
    hi = max(values)
    if hi == lo:
        return lo - 1.0, hi + 1.0
    pad = fraction * (hi - lo)
    return lo - pad, hi + pad


def log_range(values) -> tuple[float, float]:
    lo = min(values)
    hi = max(values)
    if lo <= 0:
        raise ValueError(f"log axis needs positive values, got {lo}")
    if hi == lo:
        return lo / 2.0, hi * 2.0
    return lo, hi


def linear_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if not hi > lo:
        return []
    raw = (hi - lo) / max(1, target - 1)
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * magnitude
    for multiple in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= multiple * magnitude * (1 + 1e-12):
            step = multiple * magnitude
            break
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    value = first
    while value <= hi + step * 1e-6:
        ticks.append(round(value, 10))
        value += step
    return ticks


def decade_ticks(lo: float, hi: float) -> list[float]:
    low = math.ceil(math.log10(lo) - 1e-9)
    high = math.floor(math.log10(hi) + 1e-9)
    return [10.0 ** k for k in range(low, high + 1)]


def tick_label(value: float) -> str:
    if value != 0 and (abs(value) >= 1e5 or abs(value) < 1e-3):
        exponent = math.floor(math.log10(abs(value)))
        lead = value / 10.0 ** exponent
        if abs(lead - 1.0) <= 1e-9:
            return f"1e{exponent}"
        return f"{lead:g}e{exponent}"
    return f"{value:g}"


@dataclass(frozen=True)
class Axis:
    """Maps data values onto pixel coordinates, linearly or by log10."""

    lo: float
    hi: float
    px_lo: float
    px_hi: float
    log: bool = False

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"need lo < hi, got {self.lo}..{self.hi}")
        if self.log and self.lo <= 0:
            raise ValueError(f"log axis needs lo > 0, got {self.lo}")

    def map(self, value: float) -> float:
        if self.log:
            fraction = ((math.log10(value) - math.log10(self.lo))
                        / (math.log10(self.hi) - math.log10(self.lo)))
        else:
            fraction = (value - self.lo) / (self.hi - self.lo)
        return self.px_lo + fraction * (self.px_hi - self.px_lo)

    def ticks(self) -> list[float]:
        if self.log:
            return decade_ticks(self.lo, self.hi)
        return linear_ticks(self.lo, self.hi)


class Canvas:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts: list[str] = []

    def line(self, x1, y1, x2, y2, stroke=FRAME_COLOR, width=1.0):
        self.parts.append(
            f'<line x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{width}"/>')

    def polyline(self, points, stroke, width=1.3):
        if len(points) < 2:
            return
        rendered = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points)
        self.parts.append(
            f'<polyline points="{rendered}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}"/>')

    def circle(self, cx, cy, r, fill):
        self.parts.append(
            f'<circle cx="{fmt(cx)}" cy="{fmt(cy)}" r="{r}" fill="{fill}"/>')

    def rect(self, x, y, w, h, fill="none", stroke=FRAME_COLOR, width=1.0):
        self.parts.append(
            f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(w)}" height="{fmt(h)}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>')

    def text(self, x, y, content, size=11, anchor="start", fill=TEXT_COLOR,
             rotate=False):
        transform = ""
        if rotate:
            transform = f' transform="rotate(-90 {fmt(x)} {fmt(y)})"'
        self.parts.append(
            f'<text x="{fmt(x)}" y="{fmt(y)}" font-family="{FONT}" '
            f'font-size="{size}" text-anchor="{anchor}" fill="{fill}"'
            f'{transform}>{escape(content)}</text>')

    def render(self) -> str:
        body = "\n".join(self.parts)
        return ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
                f'height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">\n'
                f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>\n'
                f"{body}\n</svg>\n")


def draw_frame(canvas: Canvas, box, x_axis: Axis, y_axis: Axis,
               title="", x_label="", y_label=""):
    """Panel frame, grid, ticks, labels.  box = (x0, y0, x1, y1) pixels."""
    x0, y0, x1, y1 = box
    for value in x_axis.ticks():
        px = x_axis.map(value)
        canvas.line(px, y0, px, y1, stroke=GRID_COLOR)
        canvas.line(px, y1, px, y1 + 4)
        canvas.text(px, y1 + 16, tick_label(value), anchor="middle")
    for value in y_axis.ticks():
        py = y_axis.map(value)
        canvas.line(x0, py, x1, py, stroke=GRID_COLOR)
        canvas.line(x0 - 4, py, x0, py)
        canvas.text(x0 - 7, py + 4, tick_label(value), anchor="end")
    canvas.rect(x0, y0, x1 - x0, y1 - y0)
    if title:
        canvas.text((x0 + x1) / 2, y0 - 8, title, size=13, anchor="middle")
    if x_label:
        canvas.text((x0 + x1) / 2, y1 + 32, x_label, anchor="middle")
    if y_label:
        canvas.text(x0 - 38, (y0 + y1) / 2, y_label, anchor="middle", rotate=True)


def draw_series(canvas: Canvas, x_axis: Axis, y_axis: Axis, points,
                color: str, marker=2.2):
    pixels = [(x_axis.map(x), y_axis.map(y)) for x, y in points]
    canvas.polyline(pixels, stroke=color)
    for px, py in pixels:
        canvas.circle(px, py, marker, fill=color)


def draw_legend(canvas: Canvas, x, y, entries):
    for index, (label, color) in enumerate(entries):
        py = y + 14 * index
        canvas.line(x, py - 3, x + 16, py - 3, stroke=color, width=2.0)
        canvas.text(x + 21, py, label, size=10)
