"""End-to-end acceptance gate.

One test per criterion, each emitting a single `A<i> PASS/FAIL` line into
the terminal summary.  Tolerances are the contractual ones, not what the
implementation happens to achieve.
"""

import math
import time

import numpy as np

from mertens_spectra.cli import main as cli_main
from mertens_spectra.dense_linalg import (
    lu_factor,
    rational_solve_allones,
    solve,
    spectral_norm,
)
from mertens_spectra.kernel_ops import KernelSpec, QuadratureGrid, bound_integral, hs_norm
from mertens_spectra.matrix_builder import (
    build_K,
    build_K_inverse,
    build_M,
    build_T,
    build_U_kernel_indexed,
    build_U_s_indexed,
    build_weights,
)
from mertens_spectra.sieve import build_mertens_table, divisor_value_set, mertens_at
from mertens_spectra.spectral_experiments import conjecture_probe, sweep

# same inequality slack the verification checks grant floating point
GRACE_REL = 1e-9
GRACE_ABS = 1e-12


def _family(n):
    s_set = divisor_value_set(n)
    u = build_U_s_indexed(n, s_set)
    return s_set, u


def test_a1_allones_identity_both_routes(acceptance):
    started = time.perf_counter()
    worst = 0.0
    exact_ok = True
    for k in range(2, 41):
        n = k * k
        _, u = _family(n)
        m_true = mertens_at(n)
        if rational_solve_allones(u) != m_true:
            exact_ok = False
            break
        ones = np.ones(u.shape[0])
        float_value = float(ones @ solve(lu_factor(u), ones))
        worst = max(worst, abs(float_value - m_true))
    cli_code = cli_main(["verify", "--k-min", "2", "--k-max", "40"])
    elapsed = time.perf_counter() - started
    ok = exact_ok and worst <= 1e-9 and cli_code == 0 and elapsed < 30.0
    acceptance("A1", ok,
               f"k=2..40 rational exact={exact_ok} float_max_dev={worst:.3e} "
               f"cli_exit={cli_code} elapsed={elapsed:.2f}s")


def test_a2_weighted_inverse_identity(acceptance):
    worst = 0.0
    ok = True
    for k in range(2, 41):
        n = k * k
        s_set, u = _family(n)
        weights = build_weights(n, s_set)
        kmat = build_K(n, u, weights.d)
        x = solve(lu_factor(kmat), weights.w)
        value = float(weights.w @ x)
        m_true = mertens_at(n)
        gap = abs(value - m_true)
        worst = max(worst, gap)
        if gap > 1e-8 * max(1.0, abs(m_true)):
            ok = False
    acceptance("A2", ok, f"k=2..40 max |w^T K^-1 w - M(n)| = {worst:.3e}")


def test_a3_norm_bounds(acceptance):
    ok = True
    detail = ""
    for k in range(2, 41):
        n = k * k
        s_set, u = _family(n)
        lu = lu_factor(u)
        t = build_T(s_set.size)
        m_mat = build_M(n, u, t, lu=lu)
        weights = build_weights(n, s_set)
        kinv = build_K_inverse(n, u, weights.d, lu=lu)
        m_abs = abs(mertens_at(n))
        spec_m = spectral_norm(m_mat)
        fro_m = float(np.linalg.norm(m_mat))
        rhs = spectral_norm(kinv) * weights.w_norm_sq

        def holds(lower, upper):
            return lower <= upper + GRACE_REL * max(abs(lower), abs(upper)) + GRACE_ABS

        if not (holds(m_abs, spec_m) and holds(spec_m, fro_m) and holds(m_abs, rhs)):
            ok = False
            detail = (f"violated at n={n}: |M|={m_abs} l2={spec_m!r} "
                      f"fro={fro_m!r} rhs={rhs!r}")
            break
    acceptance("A3", ok, detail or "k=2..40 sandwich and weighted bound hold")


def test_a4_entrywise_values(acceptance):
    table = build_mertens_table(1600)
    worst = 0.0
    for k in range(2, 41):
        n = k * k
        s_set, u = _family(n)
        m_mat = build_M(n, u, build_T(s_set.size))
        values = s_set.values
        quotients = n // np.multiply.outer(values, values)
        expected = table.mertens[quotients]
        worst = max(worst, float(np.abs(m_mat - expected).max()))
    _, u4 = _family(4)
    m4 = build_M(4, u4, build_T(3))
    hand = np.array([[-1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
    hand_dev = float(np.abs(m4 - hand).max())
    ok = worst <= 1e-6 and hand_dev <= 1e-6
    acceptance("A4", ok,
               f"k=2..40 max entry deviation {worst:.3e}, n=4 literal dev {hand_dev:.3e}")


def test_a5_construction_equality(acceptance):
    for k in range(2, 61):
        n = k * k
        s_set = divisor_value_set(n)
        by_values = build_U_s_indexed(n, s_set)
        by_kernel = build_U_kernel_indexed(n)
        if not np.array_equal(by_values, by_kernel):
            i, j = np.argwhere(by_values != by_kernel)[0]
            acceptance("A5", False,
                       f"first counterexample n={n} row {i + 1} column {j + 1}: "
                       f"value-set route {by_values[i, j]!r}, "
                       f"kernel route {by_kernel[i, j]!r}")
            return
    acceptance("A5", True, "k=2..60 both constructions agree entrywise")


def test_a6_kernel_norm_estimates(acceptance):
    started = time.perf_counter()
    ok = True
    pieces = []
    for eps in (0.05, 0.1, 0.25, 0.4):
        grid = QuadratureGrid.for_epsilon(eps, cells_per_axis=128)
        value = float(hs_norm(KernelSpec("k_eps", eps), grid))
        bound = bound_integral(eps)
        scaled_gap = abs(4.0 * eps * bound - 1.0)
        limit = 2.1 * eps / (1.0 - eps)
        if value > 1.01 * bound or scaled_gap > limit:
            ok = False
        pieces.append(f"eps={eps}: hs={value:.6f} bound={bound:.6f}")
    elapsed = time.perf_counter() - started
    ok = ok and elapsed < 60.0
    acceptance("A6", ok, "; ".join(pieces) + f"; elapsed={elapsed:.2f}s")


def test_a7_spot_spectra(acceptance):
    _, u4 = _family(4)
    m4 = build_M(4, u4, build_T(3))
    weights = build_weights(4, divisor_value_set(4))
    kinv4 = build_K_inverse(4, u4, weights.d)
    golden = (1.0 + math.sqrt(5.0)) / 2.0

    # largest root of x^3 - x^2 - 3x + 1, the K4^-1 characteristic polynomial
    def charpoly(x):
        return x ** 3 - x ** 2 - 3.0 * x + 1.0

    lo, hi = 2.0, 3.0
    for _ in range(80):
        mid = (lo + hi) / 2.0
        if charpoly(lo) * charpoly(mid) <= 0:
            hi = mid
        else:
            lo = mid
    kinv_root = (lo + hi) / 2.0

    norm_m = spectral_norm(m4)
    norm_kinv = spectral_norm(kinv4)
    ok = (abs(norm_m - 1.618) <= 1e-3 and abs(norm_m - golden) <= 1e-12
          and abs(norm_kinv - 2.170) <= 1e-2
          and abs(norm_kinv - kinv_root) <= 1e-10)
    acceptance("A7", ok,
               f"|M4|_2={norm_m!r} (golden {golden!r}), "
               f"|K4inv|_2={norm_kinv!r} (root {kinv_root!r})")


def test_a8_inverse_norm_trend(acceptance):
    started = time.perf_counter()
    records = sweep(10, 120, kind="Kinv", workers=1)
    summary = conjecture_probe(records)
    elapsed = time.perf_counter() - started
    ok = summary.alpha < 0.5 and elapsed < 600.0
    acceptance("A8", ok,
               f"k=10..120 alpha={summary.alpha:.4f} "
               f"coefficient={summary.coefficient:.4f} "
               f"ratio_last={summary.ratio_last:.4f} elapsed={elapsed:.1f}s")


def test_a9_sweep_determinism(acceptance, tmp_path):
    one = tmp_path / "sweep-w1.csv"
    two = tmp_path / "sweep-w2.csv"
    code_one = cli_main(["sweep", "--k-min", "2", "--k-max", "30",
                         "--matrix", "Kinv", "--out", str(one), "--workers", "1"])
    code_two = cli_main(["sweep", "--k-min", "2", "--k-max", "30",
                         "--matrix", "Kinv", "--out", str(two), "--workers", "2"])
    identical = one.read_bytes() == two.read_bytes()
    ok = code_one == 0 and code_two == 0 and identical
    acceptance("A9", ok,
               f"workers 1 vs 2 byte-identical={identical} "
               f"({one.stat().st_size} bytes)")
