"""Leading eigenvalues against sqrt(n), then against n with a cosine overlay.

Two stacked panels from a kind=M sweep CSV: the top shows eig1..eig8 versus
sqrt(n) on linear axes, the bottom the same series versus n with a log-10
abscissa plus the fitted oscillation (red) from an overlay CSV.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from .svg import (
    OVERLAY_COLOR,
    SERIES_COLORS,
    Axis,
    Canvas,
    draw_frame,
    draw_legend,
    draw_series,
    log_range,
    pad_range,
)
from .tables import TableError, eig_series, read_overlay, read_sweep

# the triple log in the overlay is negative below this; points under it
# come from out-of-domain inputs and are dropped with a warning
OVERLAY_MIN_N = 16.0

WIDTH, HEIGHT = 860, 660
TOP_BOX = (80.0, 40.0, 820.0, 300.0)
BOTTOM_BOX = (80.0, 380.0, 820.0, 610.0)


@dataclass(frozen=True)
class Fig1:
    svg: str
    top_x: Axis
    top_y: Axis
    bottom_x: Axis
    bottom_y: Axis


def clip_overlay(points) -> tuple[list[tuple[float, float]], int]:
    kept = [(n, v) for n, v in points
            if n >= OVERLAY_MIN_N and math.isfinite(v)]
    return kept, len(points) - len(kept)


def build_figure(rows, overlay) -> Fig1:
    series = eig_series(rows)
    eig_values = [v for points in series for _, v in points]
    n_values = [float(row["n"]) for row in rows]

    top_x = Axis(*pad_range([math.sqrt(n) for n in n_values]),
                 TOP_BOX[0], TOP_BOX[2])
    top_y = Axis(*pad_range(eig_values), TOP_BOX[3], TOP_BOX[1])
    bottom_x = Axis(*log_range(n_values), BOTTOM_BOX[0], BOTTOM_BOX[2],
                    log=True)
    bottom_y = Axis(*pad_range(eig_values + [v for _, v in overlay]),
                    BOTTOM_BOX[3], BOTTOM_BOX[1])

    canvas = Canvas(WIDTH, HEIGHT)
    draw_frame(canvas, TOP_BOX, top_x, top_y,
               title="Eight leading eigenvalues",
               x_label="sqrt(n)", y_label="eigenvalue")
    for index, points in enumerate(series):
        draw_series(canvas, top_x, top_y,
                    [(math.sqrt(n), v) for n, v in points],
                    SERIES_COLORS[index])
    draw_legend(canvas, TOP_BOX[2] - 70, TOP_BOX[1] + 14,
                [(f"eig{i}", SERIES_COLORS[i - 1]) for i in range(1, 9)])

    draw_frame(canvas, BOTTOM_BOX, bottom_x, bottom_y,
               title="Same series over n, log abscissa, with fitted oscillation",
               x_label="n", y_label="eigenvalue")
    for index, points in enumerate(series):
        draw_series(canvas, bottom_x, bottom_y, points, SERIES_COLORS[index])
    if overlay:
        canvas.polyline([(bottom_x.map(n), bottom_y.map(v)) for n, v in overlay],
                        stroke=OVERLAY_COLOR, width=1.8)
    return Fig1(svg=canvas.render(), top_x=top_x, top_y=top_y,
                bottom_x=bottom_x, bottom_y=bottom_y)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_fig1",
        description="stacked eigenvalue panels from a kind=M sweep CSV")
    parser.add_argument("sweep_csv")
    parser.add_argument("overlay_csv")
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        rows = read_sweep(args.sweep_csv, "M")
        overlay, clipped = clip_overlay(read_overlay(args.overlay_csv))
        if clipped:
            print(f"warning: clipped {clipped} overlay point(s) below "
                  f"n={OVERLAY_MIN_N:g} or non-finite", file=sys.stderr)
        figure = build_figure(rows, overlay)
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
