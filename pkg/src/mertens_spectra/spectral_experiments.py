"""Experiment drivers: identity checks, top spectra, square sweeps, overlays.

Everything here consumes the builders and solvers from the other modules
and packages their outputs the way the command line and the test suite
want them: named per-check verification reports, sweep records over
n = k^2, the oscillating fit overlay, and summary statistics probing how
the inverse-side spectral norm grows.

The verification suite for one perfect square n covers, by name:

    allones_rational / allones_float   ones^T U^-1 ones = M(n)
    weighted_inverse                   w^T K^-1 w = M(n)
    leading_entry                      (M_n)[1,1] = M(n)
    entrywise_mertens                  M_n[i,j] = M(floor(n/(s_i s_j)))
    construction_equality              S-indexed U = kernel-indexed U
    norm_sandwich                      |M(n)| <= ||M_n||_2 <= ||M_n||_F
    inverse_norm_bound                 |M(n)| <= ||K^-1||_2 ||w||^2
    weight_sum_bound                   ||w||^2 <= (sum j + sum n/j)/sqrt(n)
    small_weight_closed_form           ||w restricted to 1..r||^2 = r(r+1)/(2 sqrt n)
    symmetry_scan                      exact symmetry of every matrix
    determinant_note                   det(U) reported, never asserted

The float-side inequalities are mathematically exact, so they are enforced
with only a 1e-9 relative grace for accumulated roundoff in the computed
norms; discrepancies are reported signed so a near-miss is visible.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .dense_linalg import (
    RATIONAL_DIM_CAP,
    NonConvergenceError,
    SingularMatrixError,
    SpectrumResult,
    frobenius_norm,
    lu_factor,
    rational_solve_allones,
    solve,
    spectral_norm,
    sym_eig,
)
from .matrix_builder import (
    build_K,
    build_K_inverse,
    build_M,
    build_T,
    build_U_kernel_indexed,
    build_U_s_indexed,
    build_weights,
)
from .sieve import CapacityError, build_mertens_table, divisor_value_set, mertens_at

MATRIX_KINDS = ("M", "Kinv")

# Relative grace applied to exact mathematical inequalities evaluated in
# floating point; generous against ~1e-14 norm errors, far below any
# meaningful violation.
_INEQ_GRACE = 1e-9
_INEQ_ABS = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """One named verification check with its measured discrepancy."""

    name: str
    status: str  # pass | fail | skip
    discrepancy: float | None
    tolerance: str
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    n: int
    dim: int
    mertens_n: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.status != "fail" for check in self.checks)


def _ineq(name: str, lhs: float, rhs: float, tolerance: str,
          detail: str = "") -> CheckResult:
    """Check lhs <= rhs with relative float grace; discrepancy = lhs - rhs."""
    ok = lhs <= rhs * (1.0 + _INEQ_GRACE) + _INEQ_ABS
    return CheckResult(name=name, status="pass" if ok else "fail",
                       discrepancy=float(lhs - rhs), tolerance=tolerance,
                       detail=detail)


def _close(name: str, value: float, target: float, tol: float,
           tolerance: str, detail: str = "") -> CheckResult:
    gap = abs(value - target)
    return CheckResult(name=name, status="pass" if gap <= tol else "fail",
                       discrepancy=float(gap), tolerance=tolerance, detail=detail)


def verify_identities(n: int, rational_dim_cap: int = RATIONAL_DIM_CAP,
                      dim_cap: int | None = None) -> VerificationReport:
    """Run the full per-n check suite; numerical failures become failed checks."""
    root = isqrt(n)
    if n < 1 or root * root != n:
        raise ValueError(f"n must be a positive perfect square, got {n}")

    s_set = divisor_value_set(n)
    dim = s_set.size
    table = build_mertens_table(n)
    m_true = int(table.mertens[n])

    checks: list[CheckResult] = []
    try:
        u_matrix = build_U_s_indexed(n, s_set, dim_cap)
        u_kernel = build_U_kernel_indexed(n, dim_cap)
        t_matrix = build_T(dim, dim_cap)
        weights = build_weights(n, s_set)
        k_matrix = build_K(n, u_matrix, weights.d)
        lu = lu_factor(u_matrix)
        k_inverse = build_K_inverse(n, u_matrix, weights.d, lu)
        m_matrix = build_M(n, u_matrix, t_matrix, lu)
    except (SingularMatrixError, NonConvergenceError, CapacityError) as exc:
        checks.append(CheckResult(name="construction", status="fail",
                                  discrepancy=None, tolerance="no numerical error",
                                  detail=f"{type(exc).__name__}: {exc}"))
        return VerificationReport(n=n, dim=dim, mertens_n=m_true,
                                  checks=tuple(checks))

    # ones^T U^-1 ones, exact rational route.
    if dim <= rational_dim_cap:
        exact = rational_solve_allones(u_matrix, dim_cap=rational_dim_cap)
        checks.append(CheckResult(
            name="allones_rational",
            status="pass" if exact == m_true else "fail",
            discrepancy=float(exact - m_true),
            tolerance="exact",
            detail=f"rational value {exact}"))
    else:
        checks.append(CheckResult(
            name="allones_rational", status="skip", discrepancy=None,
            tolerance="exact",
            detail=f"dim {dim} above rational cap {rational_dim_cap}"))

    # Same identity in floating point.
    float_sum = float(solve(lu, weights.u).sum())
    checks.append(_close("allones_float", float_sum, m_true, 1e-9,
                         "1e-9 absolute"))

    weighted = float(weights.w @ (k_inverse @ weights.w))
    tol_weighted = 1e-8 * max(1.0, abs(m_true))
    checks.append(_close("weighted_inverse", weighted, m_true, tol_weighted,
                         "1e-8 * max(1, |M(n)|)"))

    checks.append(_close("leading_entry", float(m_matrix[0, 0]), m_true, 1e-8,
                         "1e-8 absolute"))

    # Every entry of M_n is a Mertens value of the paired quotient; index 0
    # of the prefix-sum table is zero, which realizes the M(0) = 0 case.
    quotients = n // np.multiply.outer(s_set.values, s_set.values)
    oracle = table.mertens[quotients]
    entry_gap = float(np.max(np.abs(m_matrix - oracle)))
    checks.append(_close("entrywise_mertens", entry_gap, 0.0, 1e-6,
                         "1e-6 max-abs"))

    if (u_matrix == u_kernel).all():
        checks.append(CheckResult(name="construction_equality", status="pass",
                                  discrepancy=0.0, tolerance="exact equality"))
    else:
        where = np.argwhere(u_matrix != u_kernel)[0]
        i, j = int(where[0]), int(where[1])
        checks.append(CheckResult(
            name="construction_equality", status="fail",
            discrepancy=float(u_kernel[i, j] - u_matrix[i, j]),
            tolerance="exact equality",
            detail=(f"first mismatch at row {i + 1}, column {j + 1}: "
                    f"value-set route {u_matrix[i, j]:.0f}, "
                    f"grid route {u_kernel[i, j]:.0f}")))

    spec_m = spectral_norm(m_matrix)
    fro_m = frobenius_norm(m_matrix)
    lower_ok = abs(m_true) <= spec_m * (1.0 + _INEQ_GRACE) + _INEQ_ABS
    upper_ok = spec_m <= fro_m * (1.0 + _INEQ_GRACE) + _INEQ_ABS
    checks.append(CheckResult(
        name="norm_sandwich",
        status="pass" if (lower_ok and upper_ok) else "fail",
        discrepancy=float(max(abs(m_true) - spec_m, spec_m - fro_m)),
        tolerance="exact inequalities, 1e-9 relative grace",
        detail=f"|M|={abs(m_true)} l2={spec_m!r} fro={fro_m!r}"))

    spec_kinv = spectral_norm(k_inverse)
    w_norm_sq = weights.w_norm_sq
    checks.append(_ineq("inverse_norm_bound", abs(m_true), spec_kinv * w_norm_sq,
                        "exact inequality, 1e-9 relative grace",
                        detail=f"l2(Kinv)={spec_kinv!r} wsq={w_norm_sq!r}"))

    small_sum = root * (root + 1) // 2
    large_sum = int((n // np.arange(1, root + 1, dtype=np.int64)).sum())
    weight_budget = (small_sum + large_sum) / math.sqrt(n)
    checks.append(_ineq("weight_sum_bound", w_norm_sq, weight_budget,
                        "exact inequality, 1e-9 relative grace",
                        detail=f"budget={weight_budget!r}"))

    w_small_sq = float(weights.w[:root] @ weights.w[:root])
    closed = root * (root + 1) / (2.0 * math.sqrt(n))
    checks.append(_close("small_weight_closed_form", w_small_sq, closed,
                         1e-12 * max(1.0, closed), "1e-12 relative"))

    asymmetric = [label for label, mat in (
        ("U", u_matrix), ("Uk", u_kernel), ("T", t_matrix), ("K", k_matrix),
        ("Kinv", k_inverse), ("M", m_matrix)) if not (mat == mat.T).all()]
    checks.append(CheckResult(
        name="symmetry_scan",
        status="pass" if not asymmetric else "fail",
        discrepancy=float(len(asymmetric)), tolerance="exact symmetry",
        detail="all symmetric" if not asymmetric
        else "asymmetric: " + ",".join(asymmetric)))

    det_value = float(np.linalg.det(u_matrix))
    checks.append(CheckResult(
        name="determinant_note", status="pass", discrepancy=None,
        tolerance="report-only",
        detail=f"det(U) = {det_value:.6g}"))

    return VerificationReport(n=n, dim=dim, mertens_n=m_true,
                              checks=tuple(checks))


def _experiment_matrix(n: int, kind: str, dim_cap: int | None = None):
    if kind not in MATRIX_KINDS:
        raise ValueError(f"kind must be one of {MATRIX_KINDS}, got {kind!r}")
    s_set = divisor_value_set(n)
    u_matrix = build_U_s_indexed(n, s_set, dim_cap)
    lu = lu_factor(u_matrix)
    if kind == "M":
        matrix = build_M(n, u_matrix, build_T(s_set.size, dim_cap), lu)
    else:
        matrix = build_K_inverse(n, u_matrix, build_weights(n, s_set).d, lu)
    return matrix, s_set


def top_spectrum(n: int, kind: str, count: int = 8,
                 want_vectors: bool = False,
                 dim_cap: int | None = None) -> SpectrumResult:
    """Leading eigenpairs (by |value|) of M_n or K_n^-1."""
    root = isqrt(n)
    if n < 1 or root * root != n:
        raise ValueError(f"n must be a positive perfect square, got {n}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    matrix, _ = _experiment_matrix(n, kind, dim_cap)
    return sym_eig(matrix, min(count, matrix.shape[0]),
                   want_vectors=want_vectors)


@dataclass(frozen=True)
class SweepRecord:
    """Everything the sweep CSV holds for one k; None marks absent values."""

    k: int
    n: int
    kind: str
    eigenvalues: tuple[float, ...] = ()
    spectral_norm: float | None = None
    frobenius_norm: float | None = None
    mertens_n: int | None = None
    w_norm_sq: float | None = None
    bound_rhs: float | None = None
    norm_over_sqrt_n: float | None = None
    norm_over_log_n: float | None = None
    status: str = "ok"


def sweep_record(k: int, kind: str, dim_cap: int | None = None) -> SweepRecord:
    """One sweep row at n = k^2; numerical failures are recorded, not raised."""
    n = k * k
    try:
        matrix, s_set = _experiment_matrix(n, kind, dim_cap)
        spectrum = sym_eig(matrix, min(8, matrix.shape[0]), want_vectors=False)
        eigenvalues = tuple(float(v) for v in spectrum.eigenvalues)
        spec_norm = abs(eigenvalues[0])
        weights = build_weights(n, s_set)
        w_norm_sq = weights.w_norm_sq
        return SweepRecord(
            k=k, n=n, kind=kind,
            eigenvalues=eigenvalues,
            spectral_norm=spec_norm,
            frobenius_norm=frobenius_norm(matrix),
            mertens_n=mertens_at(n),
            w_norm_sq=w_norm_sq,
            bound_rhs=spec_norm * w_norm_sq if kind == "Kinv" else None,
            norm_over_sqrt_n=spec_norm / math.sqrt(n),
            norm_over_log_n=spec_norm / math.log(n),
            status="ok")
    except SingularMatrixError:
        return SweepRecord(k=k, n=n, kind=kind, status="error:singular")
    except NonConvergenceError:
        return SweepRecord(k=k, n=n, kind=kind, status="error:nonconvergence")
    except CapacityError:
        return SweepRecord(k=k, n=n, kind=kind, status="error:capacity")


def _sweep_task(args: tuple[int, str, int | None]) -> SweepRecord:
    k, kind, dim_cap = args
    return sweep_record(k, kind, dim_cap)


def sweep(k_min: int, k_max: int, step: int = 1, kind: str = "M",
          workers: int = 1, dim_cap: int | None = None) -> list[SweepRecord]:
    """Sweep records for k = k_min..k_max, ascending, worker-count invariant."""
    if kind not in MATRIX_KINDS:
        raise ValueError(f"kind must be one of {MATRIX_KINDS}, got {kind!r}")
    if not 2 <= k_min <= k_max:
        raise ValueError(f"need 2 <= k_min <= k_max, got {k_min}..{k_max}")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    ks = list(range(k_min, k_max + 1, step))
    if workers == 1 or len(ks) <= 1:
        # Warm the shared Mertens cache once instead of per record.
        mertens_at(k_max * k_max)
        records = [sweep_record(k, kind, dim_cap) for k in ks]
    else:
        tasks = [(k, kind, dim_cap) for k in ks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_sweep_task, tasks))
    return sorted(records, key=lambda record: record.k)


@dataclass(frozen=True)
class FitCurveConfig:
    """Constants of the oscillating overlay and its reference term."""

    amplitude: float = 1.05
    angular_frequency: float = 14.14
    phase: float = 2.2
    reference_amplitude: float = 0.36
    reference_phase: float = 1.69
    log_base: float | None = None  # None = natural log


def _log_fn(base: float | None):
    if base is None:
        return math.log
    if base <= 1.0:
        raise ValueError(f"log base must be > 1, got {base}")
    scale = math.log(base)
    return lambda value: math.log(value) / scale


def fit_overlay(n_grid, config: FitCurveConfig | None = None
                ) -> list[tuple[float, float, float]]:
    """(n, overlay, reference) samples of the oscillating envelope fit.

    overlay(n) = amplitude * cos(omega * log n - phase) * sqrt(log log log n);
    the triple log forces n >= 16 with the natural-log default (the real
    threshold is e^e, about 15.154).
    """
    if config is None:
        config = FitCurveConfig()
    log = _log_fn(config.log_base)
    samples: list[tuple[float, float, float]] = []
    for raw in n_grid:
        value = float(raw)
        if value <= 1.0:
            raise ValueError(f"overlay undefined at n={raw}: log log log n needs n far above 1")
        level1 = log(value)
        level2 = log(level1) if level1 > 0 else float("-inf")
        level3 = log(level2) if level2 > 0 else float("-inf")
        if level3 < 0:
            raise ValueError(
                f"overlay undefined at n={raw}: log log log n is negative below "
                f"the triple-exponential threshold")
        angle = config.angular_frequency * level1
        overlay = config.amplitude * math.cos(angle - config.phase) * math.sqrt(level3)
        reference = config.reference_amplitude * math.cos(angle - config.reference_phase)
        samples.append((value, overlay, reference))
    return samples


@dataclass(frozen=True)
class ConjectureSummary:
    """How fast does the inverse-side norm grow? Report-only statistics."""

    record_count: int
    ratio_max: float
    ratio_first: float
    ratio_last: float
    ratio_slope: float
    alpha: float
    coefficient: float


def conjecture_probe(records) -> ConjectureSummary:
    """Growth statistics of ||K^-1||_2 over a Kinv sweep.

    Reports the norm-to-log-n ratio (max, endpoints, least-squares slope
    against log n) and the exponent alpha of the power-law fit
    ||K^-1|| ~ C * n^alpha from log-log regression.  No assertions: the
    underlying growth claim is a conjecture, so this only summarizes.
    """
    usable = [record for record in records
              if record.status == "ok" and record.kind == "Kinv"
              and record.spectral_norm is not None]
    if len(usable) < 10:
        raise ValueError(
            f"need at least 10 usable Kinv records, got {len(usable)}")
    usable.sort(key=lambda record: record.n)
    log_n = np.array([math.log(record.n) for record in usable])
    norms = np.array([record.spectral_norm for record in usable])
    ratios = norms / log_n
    alpha, log_c = np.polyfit(log_n, np.log(norms), 1)
    ratio_slope = np.polyfit(log_n, ratios, 1)[0]
    return ConjectureSummary(
        record_count=len(usable),
        ratio_max=float(ratios.max()),
        ratio_first=float(ratios[0]),
        ratio_last=float(ratios[-1]),
        ratio_slope=float(ratio_slope),
        alpha=float(alpha),
        coefficient=float(math.exp(log_c)))
