"""Grid of the dominant eigenvectors from a spectrum sidecar file.

Eight panels (or however many the sidecar holds, with a note) of component
value against component index.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .svg import SERIES_COLORS, Axis, Canvas, draw_frame, draw_series, pad_range
from .tables import TableError, read_eigvecs

WIDTH, HEIGHT = 880, 620
COLUMNS, ROWS = 4, 2
MARGIN_X, MARGIN_Y = 60.0, 46.0
GAP_X, GAP_Y = 46.0, 58.0
PANEL_SLOTS = COLUMNS * ROWS


@dataclass(frozen=True)
class Fig2:
    svg: str
    panel_count: int
    axes: list[tuple[Axis, Axis]]


def _panel_box(slot: int) -> tuple[float, float, float, float]:
    width = (WIDTH - 2 * MARGIN_X - (COLUMNS - 1) * GAP_X) / COLUMNS
    height = (HEIGHT - 2 * MARGIN_Y - (ROWS - 1) * GAP_Y) / ROWS
    column = slot % COLUMNS
    row = slot // COLUMNS
    x0 = MARGIN_X + column * (width + GAP_X)
    y0 = MARGIN_Y + row * (height + GAP_Y)
    return (x0, y0, x0 + width, y0 + height)


def build_figure(table) -> Fig2:
    count = min(table.count, PANEL_SLOTS)
    canvas = Canvas(WIDTH, HEIGHT)
    axes = []
    for slot in range(count):
        components = table.vectors[slot]
        box = _panel_box(slot)
        x_axis = Axis(*pad_range([1.0, float(table.dim)], fraction=0.03),
                      box[0], box[2])
        y_axis = Axis(*pad_range(components), box[3], box[1])
        draw_frame(canvas, box, x_axis, y_axis,
                   title=f"eigenvector {slot + 1}",
                   x_label="component", y_label="value" if slot % COLUMNS == 0 else "")
        points = [(float(index + 1), value)
                  for index, value in enumerate(components)]
        draw_series(canvas, x_axis, y_axis, points,
                    SERIES_COLORS[slot % len(SERIES_COLORS)], marker=1.6)
        axes.append((x_axis, y_axis))
    canvas.text(MARGIN_X, HEIGHT - 12,
                f"n={table.n} kind={table.kind} dim={table.dim}", size=10)
    if count < PANEL_SLOTS:
        canvas.text(WIDTH - MARGIN_X, HEIGHT - 12,
                    f"only {count} of {PANEL_SLOTS} eigenvectors available",
                    size=10, anchor="end")
    return Fig2(svg=canvas.render(), panel_count=count, axes=axes)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_fig2",
        description="eigenvector component panels from a spectrum sidecar")
    parser.add_argument("eigvec_sidecar")
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        table = read_eigvecs(args.eigvec_sidecar)
        figure = build_figure(table)
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(figure.svg)
    except (TableError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
