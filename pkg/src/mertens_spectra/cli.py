"""Command-line front end; owns configuration, file formats, exit codes.

Exit codes: 0 success, 1 usage error, 2 numerical failure (singular matrix
or eigensolver non-convergence), 3 verification failure (some identity
check failed).  Every error is a single-line diagnostic on stderr.

All CSV outputs begin with `# config:` (the semantic flags of the run) and
`# version:` comment lines.  Flags that cannot change file content
(--workers, --out) are deliberately left out of the echo so reruns with
different execution settings stay byte-identical.  Floats are written with
repr, the shortest digit string that round-trips, so dumped matrices
re-parse bit-identically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .dense_linalg import NonConvergenceError, SingularMatrixError
from .kernel_ops import (
    DEFAULT_CELLS,
    KernelSpec,
    QuadratureGrid,
    bound_integral,
    hs_distance_truncated,
    hs_norm,
)
from .matrix_builder import (
    DEFAULT_DIM_CAP,
    build_K,
    build_K_inverse,
    build_M,
    build_T,
    build_U_kernel_indexed,
    build_U_s_indexed,
    build_weights,
)
from .sieve import DEFAULT_SIEVE_CAP, CapacityError, divisor_value_set, mertens_at
from .spectral_experiments import (
    FitCurveConfig,
    conjecture_probe,
    fit_overlay,
    sweep,
    top_spectrum,
    verify_identities,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3

NA = "NA"

MATRIX_DUMP_KINDS = ("U", "Uk", "T", "D", "K", "Kinv", "M")

SWEEP_HEADER = ("k,n,kind,eig1,eig2,eig3,eig4,eig5,eig6,eig7,eig8,"
                "spectral_norm,frobenius_norm,mertens_n,w_norm_sq,bound_rhs,"
                "norm_over_sqrt_n,norm_over_log_n,status")

KERNEL_HEADER = "epsilon,delta,hs_norm,bound,two_grid_error"

FIT_HEADER = "n,overlay,reference_term"


class UsageError(Exception):
    """Bad arguments or out-of-domain request; exits 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the exit-code contract wants 1.
    def error(self, message):
        raise UsageError(message)


def format_float(value) -> str:
    return repr(float(value))


def version_line() -> str:
    return f"# version: mertens-spectra {__version__} format v1"


def config_line(subcommand: str, pairs) -> str:
    rendered = []
    for key, value in pairs:
        if value is None:
            continue
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = format_float(value)
        else:
            text = str(value)
        rendered.append(f"{key}={text}")
    return f"# config: {subcommand} " + " ".join(rendered)


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw}")
    return value


def _float_list(raw: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {raw!r}") from exc


def _log_base(raw: str) -> float | None:
    if raw == "e":
        return None
    try:
        value = float(raw)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"log base must be 'e' or a number, got {raw!r}") from exc
    if value <= 1.0:
        raise argparse.ArgumentTypeError(f"log base must exceed 1, got {raw}")
    return value


def build_parser() -> _Parser:
    parser = _Parser(
        prog="mertens-spectra",
        description="Mertens-related matrix families: identities, spectra, kernels")
    parser.add_argument("--sieve-limit", type=_positive_int, default=None,
                        help=f"cap on sieve table size (default {DEFAULT_SIEVE_CAP})")
    parser.add_argument("--dim-cap", type=_positive_int, default=None,
                        help=f"cap on dense matrix dimension (default {DEFAULT_DIM_CAP}, "
                             "env MERTENS_SPECTRA_MAX_DIM)")
    commands = parser.add_subparsers(dest="command", required=True)

    mertens = commands.add_parser("mertens", help="print M(n)")
    mertens.add_argument("--n", type=int, required=True)

    matrix = commands.add_parser("matrix", help="dump a family matrix")
    matrix.add_argument("--n", type=int, required=True)
    matrix.add_argument("--kind", choices=MATRIX_DUMP_KINDS, required=True)
    matrix.add_argument("--out", default=None)

    spectrum = commands.add_parser("spectrum", help="leading eigenvalues as JSON")
    spectrum.add_argument("--n", type=int, required=True)
    spectrum.add_argument("--matrix", choices=("M", "Kinv"), required=True)
    spectrum.add_argument("--top", type=_positive_int, default=8)
    spectrum.add_argument("--eigvecs", action="store_true",
                          help="also write an eigenvector sidecar file")
    spectrum.add_argument("--eigvecs-out", default=None,
                          help="sidecar path (default eigvecs-n<N>-<kind>.txt)")

    sweep_cmd = commands.add_parser("sweep", help="per-square records to CSV")
    sweep_cmd.add_argument("--k-min", type=int, required=True)
    sweep_cmd.add_argument("--k-max", type=int, required=True)
    sweep_cmd.add_argument("--step", type=_positive_int, default=1)
    sweep_cmd.add_argument("--matrix", choices=("M", "Kinv"), required=True)
    sweep_cmd.add_argument("--out", required=True)
    sweep_cmd.add_argument("--workers", type=_positive_int, default=1)
    sweep_cmd.add_argument("--probe", action="store_true",
                           help="print growth statistics after the sweep (Kinv)")

    verify = commands.add_parser("verify", help="identity suite; exit 3 on failure")
    verify.add_argument("--n", type=int, default=None)
    verify.add_argument("--k-min", type=int, default=None)
    verify.add_argument("--k-max", type=int, default=None)

    fit = commands.add_parser("fit-curve", help="oscillating overlay samples to CSV")
    fit.add_argument("--n-min", type=float, required=True)
    fit.add_argument("--n-max", type=float, required=True)
    fit.add_argument("--points", type=_positive_int, required=True)
    fit.add_argument("--amplitude", type=float, default=1.05)
    fit.add_argument("--omega", type=float, default=14.14)
    fit.add_argument("--phase", type=float, default=2.2)
    fit.add_argument("--reference-amplitude", type=float, default=0.36)
    fit.add_argument("--reference-phase", type=float, default=1.69)
    fit.add_argument("--log-base", type=_log_base, default=None,
                     help="'e' (default) or a numeric base for all logarithms")
    fit.add_argument("--out", required=True)

    hs = commands.add_parser("kernel-hs", help="Hilbert-Schmidt norm report")
    hs.add_argument("--epsilon", type=_float_list, required=True,
                    help="comma-separated epsilon values in (0, 0.5)")
    hs.add_argument("--cells", type=_positive_int, default=DEFAULT_CELLS)
    hs.add_argument("--out", default=None)

    dist = commands.add_parser("kernel-distance",
                               help="truncated-domain distance trends")
    dist.add_argument("--eps-list", type=_float_list, required=True)
    dist.add_argument("--delta-list", type=_float_list, required=True)
    dist.add_argument("--cells", type=_positive_int, default=DEFAULT_CELLS)
    dist.add_argument("--out", required=True)

    return parser


def render_matrix_dump(kind: str, n: int, matrix: np.ndarray,
                       config: str) -> str:
    dim = matrix.shape[0]
    lines = [f"# mertens-matrix v1 kind={kind} n={n} dim={dim}",
             config, version_line()]
    for row in matrix:
        lines.append(",".join(format_float(value) for value in row))
    return "\n".join(lines) + "\n"


def parse_matrix_dump(text: str) -> tuple[dict, np.ndarray]:
    """Parse the dump format back into metadata and a float64 matrix."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# mertens-matrix v1 "):
        raise ValueError("not a mertens-matrix v1 dump")
    meta: dict = {}
    for token in lines[0].split()[3:]:
        key, _, value = token.partition("=")
        meta[key] = value
    meta["n"] = int(meta["n"])
    meta["dim"] = int(meta["dim"])
    rows = [line for line in lines[1:] if line and not line.startswith("#")]
    if len(rows) != meta["dim"]:
        raise ValueError(f"expected {meta['dim']} rows, found {len(rows)}")
    data = np.array([[float(cell) for cell in row.split(",")] for row in rows],
                    dtype=np.float64)
    if data.shape != (meta["dim"], meta["dim"]):
        raise ValueError(f"expected square data, got shape {data.shape}")
    return meta, data


def render_eigvec_sidecar(n: int, kind: str, vectors: np.ndarray,
                          config: str) -> str:
    dim, count = vectors.shape
    lines = [f"# mertens-eigvecs v1 n={n} kind={kind} dim={dim} count={count}",
             config, version_line()]
    for column in range(count):
        lines.append(",".join(format_float(value) for value in vectors[:, column]))
    return "\n".join(lines) + "\n"


def render_sweep_csv(records, config: str) -> str:
    lines = [config, version_line(), SWEEP_HEADER]
    for record in records:
        eigs = [format_float(v) for v in record.eigenvalues[:8]]
        eigs += [NA] * (8 - len(eigs))

        def opt(value, integer=False):
            if value is None:
                return NA
            return str(int(value)) if integer else format_float(value)

        lines.append(",".join([
            str(record.k), str(record.n), record.kind, *eigs,
            opt(record.spectral_norm), opt(record.frobenius_norm),
            opt(record.mertens_n, integer=True), opt(record.w_norm_sq),
            opt(record.bound_rhs), opt(record.norm_over_sqrt_n),
            opt(record.norm_over_log_n), record.status]))
    return "\n".join(lines) + "\n"


def _resolve_caps(args) -> tuple[int, int]:
    sieve_limit = args.sieve_limit if args.sieve_limit is not None else DEFAULT_SIEVE_CAP
    if args.dim_cap is not None:
        dim_cap = args.dim_cap
    elif os.environ.get("MERTENS_SPECTRA_MAX_DIM"):
        try:
            dim_cap = int(os.environ["MERTENS_SPECTRA_MAX_DIM"])
        except ValueError as exc:
            raise UsageError(
                f"MERTENS_SPECTRA_MAX_DIM must be an integer, got "
                f"{os.environ['MERTENS_SPECTRA_MAX_DIM']!r}") from exc
    else:
        dim_cap = DEFAULT_DIM_CAP
    return sieve_limit, dim_cap


def _cmd_mertens(args) -> int:
    if args.n < 0:
        raise UsageError(f"--n must be >= 0, got {args.n}")
    sieve_limit, _ = _resolve_caps(args)
    print(mertens_at(args.n, cap=sieve_limit))
    return EXIT_OK


def _build_dump_matrix(kind: str, n: int, dim_cap: int) -> np.ndarray:
    if n < 1:
        raise UsageError(f"--n must be >= 1, got {n}")
    if kind == "Uk":
        return build_U_kernel_indexed(n, dim_cap)
    s_set = divisor_value_set(n)
    if kind == "T":
        return build_T(s_set.size, dim_cap)
    u_matrix = build_U_s_indexed(n, s_set, dim_cap)
    if kind == "U":
        return u_matrix
    weights = build_weights(n, s_set)
    if kind == "D":
        return np.diag(weights.d)
    if kind == "K":
        return build_K(n, u_matrix, weights.d)
    if kind == "Kinv":
        return build_K_inverse(n, u_matrix, weights.d)
    if kind == "M":
        return build_M(n, u_matrix, build_T(s_set.size, dim_cap))
    raise UsageError(f"unknown matrix kind {kind!r}")


def _cmd_matrix(args) -> int:
    _, dim_cap = _resolve_caps(args)
    matrix = _build_dump_matrix(args.kind, args.n, dim_cap)
    config = config_line("matrix", [("n", args.n), ("kind", args.kind),
                                    ("dim_cap", dim_cap)])
    _write_text(args.out, render_matrix_dump(args.kind, args.n, matrix, config))
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    _, dim_cap = _resolve_caps(args)
    result = top_spectrum(args.n, args.matrix, count=args.top,
                          want_vectors=args.eigvecs, dim_cap=dim_cap)
    payload = {
        "n": args.n,
        "kind": args.matrix,
        "eigenvalues": [float(v) for v in result.eigenvalues],
        "residual_max": float(result.residuals.max()),
    }
    print(json.dumps(payload))
    if args.eigvecs:
        path = args.eigvecs_out or f"eigvecs-n{args.n}-{args.matrix}.txt"
        config = config_line("spectrum", [("n", args.n), ("matrix", args.matrix),
                                          ("top", args.top), ("dim_cap", dim_cap)])
        _write_text(path, render_eigvec_sidecar(args.n, args.matrix,
                                                result.eigenvectors, config))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    _, dim_cap = _resolve_caps(args)
    try:
        records = sweep(args.k_min, args.k_max, step=args.step,
                        kind=args.matrix, workers=args.workers,
                        dim_cap=dim_cap)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    config = config_line("sweep", [("k_min", args.k_min), ("k_max", args.k_max),
                                   ("step", args.step), ("matrix", args.matrix),
                                   ("dim_cap", dim_cap)])
    _write_text(args.out, render_sweep_csv(records, config))
    if args.probe:
        if args.matrix != "Kinv":
            raise UsageError("--probe only applies to --matrix Kinv")
        summary = conjecture_probe(records)
        print(f"records={summary.record_count} "
              f"ratio_max={format_float(summary.ratio_max)} "
              f"ratio_first={format_float(summary.ratio_first)} "
              f"ratio_last={format_float(summary.ratio_last)} "
              f"ratio_slope={format_float(summary.ratio_slope)} "
              f"alpha={format_float(summary.alpha)} "
              f"coefficient={format_float(summary.coefficient)}")
    return EXIT_OK


def _print_report(report) -> None:
    print(f"n={report.n} dim={report.dim} M(n)={report.mertens_n}")
    for check in report.checks:
        gap = "-" if check.discrepancy is None else format_float(check.discrepancy)
        line = (f"  {check.name:<26} {check.status:<4} "
                f"discrepancy={gap} [{check.tolerance}]")
        if check.detail:
            line += f" {check.detail}"
        print(line)


def _cmd_verify(args) -> int:
    _, dim_cap = _resolve_caps(args)
    if args.n is not None:
        if args.k_min is not None or args.k_max is not None:
            raise UsageError("use either --n or a --k-min/--k-max range, not both")
        targets = [args.n]
    else:
        if args.k_min is None or args.k_max is None:
            raise UsageError("verify needs --n or both --k-min and --k-max")
        if not 2 <= args.k_min <= args.k_max:
            raise UsageError(
                f"need 2 <= k_min <= k_max, got {args.k_min}..{args.k_max}")
        targets = [k * k for k in range(args.k_min, args.k_max + 1)]
    failures = 0
    for n in targets:
        report = verify_identities(n, dim_cap=dim_cap)
        _print_report(report)
        if not report.passed:
            failures += 1
    print(f"verified {len(targets)} value(s), failures: {failures}")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def _cmd_fit_curve(args) -> int:
    if not args.n_min <= args.n_max:
        raise UsageError(f"need n_min <= n_max, got {args.n_min}..{args.n_max}")
    if args.points < 2:
        raise UsageError(f"--points must be >= 2, got {args.points}")
    config_obj = FitCurveConfig(
        amplitude=args.amplitude, angular_frequency=args.omega,
        phase=args.phase, reference_amplitude=args.reference_amplitude,
        reference_phase=args.reference_phase, log_base=args.log_base)
    grid = np.geomspace(args.n_min, args.n_max, args.points)
    try:
        samples = fit_overlay(grid, config_obj)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    config = config_line("fit-curve", [
        ("n_min", args.n_min), ("n_max", args.n_max), ("points", args.points),
        ("amplitude", args.amplitude), ("omega", args.omega),
        ("phase", args.phase), ("reference_amplitude", args.reference_amplitude),
        ("reference_phase", args.reference_phase),
        ("log_base", "e" if args.log_base is None else args.log_base)])
    lines = [config, version_line(), FIT_HEADER]
    for n_value, overlay, reference in samples:
        lines.append(",".join([format_float(n_value), format_float(overlay),
                               format_float(reference)]))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_kernel_hs(args) -> int:
    if not args.epsilon:
        raise UsageError("--epsilon needs at least one value")
    for eps in args.epsilon:
        if not 0.0 < eps < 0.5:
            raise UsageError(f"epsilon must be in (0, 0.5), got {eps}")
    config = config_line("kernel-hs", [
        ("epsilon", ",".join(format_float(e) for e in args.epsilon)),
        ("cells", args.cells)])
    lines = [config, version_line(), KERNEL_HEADER]
    for eps in args.epsilon:
        grid = QuadratureGrid.for_epsilon(eps, cells_per_axis=args.cells)
        result = hs_norm(KernelSpec("k_eps", eps), grid)
        lines.append(",".join([
            format_float(eps), NA, format_float(result.value),
            format_float(bound_integral(eps)),
            format_float(result.two_grid_error)]))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_kernel_distance(args) -> int:
    if not args.eps_list or not args.delta_list:
        raise UsageError("--eps-list and --delta-list each need at least one value")
    for eps in args.eps_list:
        if eps <= 0:
            raise UsageError(f"eps values must be > 0, got {eps}")
    for delta in args.delta_list:
        if not 0.0 < delta < 0.25:
            raise UsageError(f"delta must be in (0, 0.25), got {delta}")
    config = config_line("kernel-distance", [
        ("eps_list", ",".join(format_float(e) for e in args.eps_list)),
        ("delta_list", ",".join(format_float(d) for d in args.delta_list)),
        ("cells", args.cells)])
    lines = [config, version_line(), KERNEL_HEADER]
    for eps in args.eps_list:
        for delta in args.delta_list:
            distance = hs_distance_truncated(eps, None, delta,
                                             cells_per_axis=args.cells)
            lines.append(",".join([
                format_float(eps), format_float(delta), format_float(distance),
                NA, NA]))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


_DISPATCH = {
    "mertens": _cmd_mertens,
    "matrix": _cmd_matrix,
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "fit-curve": _cmd_fit_curve,
    "kernel-hs": _cmd_kernel_hs,
    "kernel-distance": _cmd_kernel_distance,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMatrixError, NonConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())
