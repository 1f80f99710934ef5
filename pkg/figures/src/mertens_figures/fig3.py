"""Leading inverse-kernel eigenvalues with a norm-growth inset.

Main panel: eig1..eig8 of the inverse kernel matrix against sqrt(n).
Inset: the spectral norm divided by ln n against n (log abscissa), the
ratio the CSV already carries, so near-linear growth in log n shows up as
a flattening curve.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from .svg import (
    SERIES_COLORS,
    Axis,
    Canvas,
    draw_frame,
    draw_legend,
    draw_series,
    log_range,
    pad_range,
)
from .tables import TableError, cell_float, eig_series, read_sweep

WIDTH, HEIGHT = 860, 560
MAIN_BOX = (80.0, 50.0, 820.0, 500.0)
INSET_BOX = (150.0, 90.0, 400.0, 230.0)


@dataclass(frozen=True)
class Fig3:
    svg: str
    main_x: Axis
    main_y: Axis
    inset_x: Axis
    inset_y: Axis


def build_figure(rows) -> Fig3:
    series = eig_series(rows)
    eig_values = [v for points in series for _, v in points]
    n_values = [float(row["n"]) for row in rows]
    ratio_points = [(float(row["n"]), value) for row in rows
                    if (value := cell_float(row, "norm_over_log_n")) is not None]

    main_x = Axis(*pad_range([math.sqrt(n) for n in n_values]),
                  MAIN_BOX[0], MAIN_BOX[2])
    main_y = Axis(*pad_range(eig_values), MAIN_BOX[3], MAIN_BOX[1])

    canvas = Canvas(WIDTH, HEIGHT)
    draw_frame(canvas, MAIN_BOX, main_x, main_y,
               title="Eight leading eigenvalues of the inverse kernel matrix",
               x_label="sqrt(n)", y_label="eigenvalue")
    for index, points in enumerate(series):
        draw_series(canvas, main_x, main_y,
                    [(math.sqrt(n), v) for n, v in points],
                    SERIES_COLORS[index])
    draw_legend(canvas, MAIN_BOX[2] - 70, MAIN_BOX[1] + 14,
                [(f"eig{i}", SERIES_COLORS[i - 1]) for i in range(1, 9)])

    if not ratio_points:
        raise TableError("no usable norm_over_log_n values for the inset")
    inset_x = Axis(*log_range([n for n, _ in ratio_points]),
                   INSET_BOX[0], INSET_BOX[2], log=True)
    inset_y = Axis(*pad_range([v for _, v in ratio_points]),
                   INSET_BOX[3], INSET_BOX[1])
    canvas.rect(INSET_BOX[0] - 46, INSET_BOX[1] - 26,
                INSET_BOX[2] - INSET_BOX[0] + 60,
                INSET_BOX[3] - INSET_BOX[1] + 56, fill="#ffffff")
    draw_frame(canvas, INSET_BOX, inset_x, inset_y,
               title="spectral norm / ln n", x_label="n")
    draw_series(canvas, inset_x, inset_y, ratio_points, "#333333", marker=1.8)

    return Fig3(svg=canvas.render(), main_x=main_x, main_y=main_y,
                inset_x=inset_x, inset_y=inset_y)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_fig3",
        description="inverse-kernel eigenvalue panel from a kind=Kinv sweep CSV")
    parser.add_argument("sweep_csv")
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        rows = read_sweep(args.sweep_csv, "Kinv", extra=("norm_over_log_n",))
        figure = build_figure(rows)
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
