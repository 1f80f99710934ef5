"""Experiment-layer tests: verification suite, sweeps, overlay, probe."""

import math

import numpy as np
import pytest

import mertens_spectra.spectral_experiments as experiments
from mertens_spectra.dense_linalg import NonConvergenceError, sym_eig
from mertens_spectra.spectral_experiments import (
    FitCurveConfig,
    SweepRecord,
    conjecture_probe,
    fit_overlay,
    sweep,
    sweep_record,
    top_spectrum,
    verify_identities,
)

EXPECTED_CHECKS = [
    "allones_rational", "allones_float", "weighted_inverse", "leading_entry",
    "entrywise_mertens", "construction_equality", "norm_sandwich",
    "inverse_norm_bound", "weight_sum_bound", "small_weight_closed_form",
    "symmetry_scan", "determinant_note",
]


def bisect_root(poly, lo, hi, steps=200):
    flo = poly(lo)
    for _ in range(steps):
        mid = (lo + hi) / 2.0
        if (poly(mid) < 0) == (flo < 0):
            lo, flo = mid, poly(mid)
        else:
            hi = mid
    return (lo + hi) / 2.0


def cubic(x):
    # characteristic polynomial of the 3x3 inverse-side matrix at n=4
    return x ** 3 - x ** 2 - 3.0 * x + 1.0


def test_verify_identities_n4_all_pass():
    report = verify_identities(4)
    assert report.n == 4 and report.dim == 3 and report.mertens_n == -1
    assert [c.name for c in report.checks] == EXPECTED_CHECKS
    assert report.passed
    by_name = {c.name: c for c in report.checks}
    assert by_name["allones_rational"].status == "pass"
    assert by_name["allones_rational"].discrepancy == 0.0


def test_verify_identities_trivial_and_large():
    assert verify_identities(1).passed
    assert verify_identities(1600).passed


def test_verify_identities_rejects_nonsquare():
    with pytest.raises(ValueError):
        verify_identities(5)
    with pytest.raises(ValueError):
        verify_identities(0)


def test_verify_identities_skips_rational_above_cap():
    report = verify_identities(144, rational_dim_cap=5)
    by_name = {c.name: c for c in report.checks}
    assert by_name["allones_rational"].status == "skip"
    assert report.passed  # skip is not a failure


def test_top_spectrum_literal_oracles():
    kinv = top_spectrum(4, "Kinv")
    largest = bisect_root(cubic, 2.0, 3.0)
    middle = bisect_root(cubic, -2.0, 0.0)
    smallest = bisect_root(cubic, 0.0, 1.0)
    assert np.abs(kinv.eigenvalues - [largest, middle, smallest]).max() <= 1e-10
    m1 = top_spectrum(1, "M")
    assert list(m1.eigenvalues) == [1.0]
    m4 = top_spectrum(4, "M")
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    assert np.abs(m4.eigenvalues - [-golden, 1.0, golden - 1.0]).max() <= 1e-12


def test_top_spectrum_consistent_with_full_eigensolve():
    from mertens_spectra.matrix_builder import build_M, build_T, build_U_s_indexed
    from mertens_spectra.sieve import divisor_value_set
    n = 16
    s = divisor_value_set(n)
    u = build_U_s_indexed(n, s)
    full = sym_eig(build_M(n, u, build_T(s.size)), s.size)
    part = top_spectrum(n, "M", count=4)
    assert (part.eigenvalues == full.eigenvalues[:4]).all()


def test_top_spectrum_count_clipped_and_validated():
    result = top_spectrum(4, "M", count=8)
    assert len(result.eigenvalues) == 3
    with pytest.raises(ValueError):
        top_spectrum(4, "M", count=0)
    with pytest.raises(ValueError):
        top_spectrum(6, "M")
    with pytest.raises(ValueError):
        top_spectrum(4, "X")


def test_top_spectrum_vectors_on_request():
    with_vecs = top_spectrum(9, "M", want_vectors=True)
    assert with_vecs.eigenvectors is not None
    assert with_vecs.eigenvectors.shape == (5, 5)
    without = top_spectrum(9, "M")
    assert without.eigenvectors is None


def test_sweep_cardinality_and_fields():
    records = sweep(2, 3, kind="M")
    assert [r.n for r in records] == [4, 9]
    first = records[0]
    assert first.kind == "M" and first.status == "ok"
    assert len(first.eigenvalues) == 3  # dim 2k-1 caps the slots
    assert abs(first.spectral_norm - 1.618033988749894) <= 1e-12
    assert first.mertens_n == -1
    assert first.bound_rhs is None
    assert abs(first.norm_over_sqrt_n - first.spectral_norm / 2.0) <= 1e-15
    assert abs(first.norm_over_log_n - first.spectral_norm / math.log(4)) <= 1e-15


def test_sweep_eigenvalues_sorted_by_magnitude():
    for record in sweep(2, 12, kind="M") + sweep(2, 12, kind="Kinv"):
        magnitudes = [abs(v) for v in record.eigenvalues]
        assert all(a >= b - 1e-12 for a, b in zip(magnitudes, magnitudes[1:]))
        assert len(record.eigenvalues) == min(8, 2 * record.k - 1)
        assert abs(record.spectral_norm - magnitudes[0]) <= 1e-12


def test_sweep_norm_bounds_hold_per_record():
    for record in sweep(2, 12, kind="M"):
        assert abs(record.mertens_n) <= record.spectral_norm * (1 + 1e-9) + 1e-12
        assert record.spectral_norm <= record.frobenius_norm * (1 + 1e-9) + 1e-12
    for record in sweep(2, 12, kind="Kinv"):
        assert record.bound_rhs is not None
        assert abs(record.mertens_n) <= record.bound_rhs * (1 + 1e-9) + 1e-12


def test_sweep_worker_count_does_not_change_records():
    serial = sweep(2, 10, kind="Kinv", workers=1)
    parallel = sweep(2, 10, kind="Kinv", workers=3)
    assert serial == parallel


def test_sweep_step_and_validation():
    stepped = sweep(2, 10, step=3, kind="M")
    assert [r.k for r in stepped] == [2, 5, 8]
    with pytest.raises(ValueError):
        sweep(1, 5)
    with pytest.raises(ValueError):
        sweep(5, 2)
    with pytest.raises(ValueError):
        sweep(2, 5, step=0)
    with pytest.raises(ValueError):
        sweep(2, 5, kind="Q")
    with pytest.raises(ValueError):
        sweep(2, 5, workers=0)


def test_sweep_records_failures_and_continues(monkeypatch):
    real = sym_eig

    def shaky(a, top_k, want_vectors=True):
        if a.shape[0] == 5:  # the k = 3 matrix
            raise NonConvergenceError("synthetic")
        return real(a, top_k, want_vectors)

    monkeypatch.setattr(experiments, "sym_eig", shaky)
    records = sweep(2, 4, kind="M")
    assert [r.status for r in records] == ["ok", "error:nonconvergence", "ok"]
    broken = records[1]
    assert broken.eigenvalues == ()
    assert broken.spectral_norm is None and broken.mertens_n is None


def test_sweep_record_capacity_marker():
    record = sweep_record(40, "M", dim_cap=10)
    assert record.status == "error:capacity"


def test_fit_overlay_agrees_with_direct_reimplementation():
    grid = np.geomspace(16, 1e6, 50)
    samples = fit_overlay(grid)
    for n_value, overlay, reference in samples:
        l1 = math.log(n_value)
        expected = 1.05 * math.cos(14.14 * l1 - 2.2) * math.sqrt(math.log(math.log(l1)))
        expected_ref = 0.36 * math.cos(14.14 * l1 - 1.69)
        assert abs(overlay - expected) <= 1e-12
        assert abs(reference - expected_ref) <= 1e-12


def test_fit_overlay_spot_values():
    ((_, overlay_100, reference_100),) = fit_overlay([100])
    assert abs(overlay_100 - 0.681) <= 0.005
    assert abs(reference_100 - 0.2981) <= 0.002
    ((_, overlay_16, _),) = fit_overlay([16])
    assert abs(overlay_16) <= 0.148


def test_fit_overlay_domain():
    with pytest.raises(ValueError):
        fit_overlay([15])
    with pytest.raises(ValueError):
        fit_overlay([1])
    with pytest.raises(ValueError):
        fit_overlay([100, 15])
    assert len(fit_overlay([16, 17, 1000])) == 3


def test_fit_overlay_custom_constants():
    config = FitCurveConfig(amplitude=2.0, angular_frequency=1.0, phase=0.0,
                            reference_amplitude=1.0, reference_phase=0.0)
    ((_, overlay, reference),) = fit_overlay([100], config)
    l1 = math.log(100)
    assert abs(overlay - 2.0 * math.cos(l1) * math.sqrt(math.log(math.log(l1)))) <= 1e-12
    assert abs(reference - math.cos(l1)) <= 1e-12


def test_fit_overlay_alternate_log_base():
    config = FitCurveConfig(log_base=10.0)
    with pytest.raises(ValueError):
        fit_overlay([1e9], config)
    ((_, overlay, _),) = fit_overlay([1e11], config)
    lg = math.log10(1e11)
    expected = 1.05 * math.cos(14.14 * lg - 2.2) * math.sqrt(math.log10(math.log10(lg)))
    assert abs(overlay - expected) <= 1e-12
    with pytest.raises(ValueError):
        fit_overlay([100], FitCurveConfig(log_base=0.5))


def synthetic_records(norms):
    return [SweepRecord(k=10 + i, n=(10 + i) ** 2, kind="Kinv",
                        eigenvalues=(norm,), spectral_norm=norm,
                        frobenius_norm=norm, mertens_n=0, w_norm_sq=1.0,
                        bound_rhs=norm, norm_over_sqrt_n=0.0,
                        norm_over_log_n=0.0, status="ok")
            for i, norm in enumerate(norms)]


def test_conjecture_probe_constant_norms_give_zero_exponent():
    summary = conjecture_probe(synthetic_records([5.0] * 15))
    assert abs(summary.alpha) <= 1e-10
    assert abs(summary.coefficient - 5.0) <= 1e-8
    assert summary.record_count == 15


def test_conjecture_probe_log_growth_gives_unit_ratio():
    norms = [math.log((10 + i) ** 2) for i in range(15)]
    summary = conjecture_probe(synthetic_records(norms))
    assert abs(summary.ratio_max - 1.0) <= 1e-12
    assert abs(summary.ratio_first - 1.0) <= 1e-12
    assert abs(summary.ratio_last - 1.0) <= 1e-12
    assert abs(summary.ratio_slope) <= 1e-12


def test_conjecture_probe_needs_enough_records():
    with pytest.raises(ValueError):
        conjecture_probe(synthetic_records([1.0] * 9))
    # error rows and wrong kinds are not usable
    bad = synthetic_records([1.0] * 12)
    bad[0] = SweepRecord(k=99, n=99 ** 2, kind="Kinv", status="error:singular")
    assert conjecture_probe(bad).record_count == 11


def test_conjecture_probe_on_real_sweep():
    records = sweep(10, 40, kind="Kinv")
    summary = conjecture_probe(records)
    assert summary.record_count == 31
    assert summary.alpha < 0.5
    assert summary.ratio_max > 0.0
