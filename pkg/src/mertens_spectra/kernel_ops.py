"""The continuum side: profile f, kernels u/k/k_eps, and their HS norms.

The profile

    f(t) = 1/(2t)    on (0, 1/2],
    f(t) = 2(1 - t)  on (1/2, 1]

is continuous at 1/2, strictly decreasing, and maps (0, 1] onto [0, inf).
Three kernels on (0,1]^2 derive from it:

    u(s, t)     = floor(f(s) f(t))
    k(s, t)     = f(s)^(-1/2)    u(s, t) f(t)^(-1/2)
    k_eps(s, t) = f(s)^(-1/2-eps) u(s, t) f(t)^(-1/2-eps)

Pointwise, floor(g) <= g gives k_eps^2 <= f(s)^(1-2eps) f(t)^(1-2eps), and
the one-dimensional factor integrates in closed form to

    bound_integral(eps) = 1/(4 eps) + 1/(4 (1 - eps)),

which blows up like 1/(4 eps): k_eps is Hilbert-Schmidt for eps > 0 but the
bound degenerates as eps -> 0.  Quadrature for the HS norms must resolve an
edge singularity of type t^(-(1-2eps)) at s -> 0 and t -> 0; a composite
Gauss-Legendre rule on a mesh power-graded toward 0 does this, with a
two-grid difference as the error estimate.

The floor makes every integrand piecewise constant along level sets
f(s)f(t) = m.  Cells are not aligned with these jumps; the two-grid
estimate absorbs them, which is enough at the 1% tolerances used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrix_builder import build_K, build_U_kernel_indexed, kernel_grid

_VARIANTS = ("u", "k", "k_eps")

# Relative slack for recognizing integer-valued products of f; grid
# rationals have small denominators, so the nearest float of a true
# integer product sits many orders of magnitude closer than this.
_FLOOR_SNAP = 1e-9

DEFAULT_CELLS = 256
GAUSS_ORDER = 8


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel to evaluate: u, k, or k_eps (with its epsilon)."""

    variant: str
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if self.variant not in _VARIANTS:
            raise ValueError(f"variant must be one of {_VARIANTS}, got {self.variant!r}")
        if self.variant == "k_eps" and self.epsilon <= 0:
            raise ValueError(f"k_eps requires epsilon > 0, got {self.epsilon}")
        if self.variant != "k_eps" and self.epsilon != 0.0:
            raise ValueError(f"epsilon only applies to k_eps, got {self.epsilon}")


def f_eval(t):
    """The profile f on (0, 1], scalar or array."""
    arr = np.asarray(t, dtype=np.float64)
    if (arr <= 0).any() or (arr > 1).any():
        raise ValueError("f is defined on (0, 1] only")
    left = 1.0 / (2.0 * arr)
    right = 2.0 * (1.0 - arr)
    result = np.where(arr <= 0.5, left, right)
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return float(result)
    return result


def _snapped_floor(p: np.ndarray) -> np.ndarray:
    """floor(p) with products recognized as integers snapped first.

    The discrete family takes exact integer values f(i/2r) f(j/2r); their
    float images can sit a few ulp below the integer, where a bare floor
    loses 1.  Snapping within a relative 1e-9 window fixes the lattice
    points and moves quadrature nodes only on a measure-zero set.
    """
    nearest = np.rint(p)
    snap = np.abs(p - nearest) <= _FLOOR_SNAP * np.maximum(1.0, np.abs(p))
    return np.where(snap, nearest, np.floor(p))


def kernel_eval(spec: KernelSpec, s, t):
    """Evaluate the kernel named by spec at (s, t); symmetric, broadcasting."""
    fs = np.asarray(f_eval(s), dtype=np.float64)
    ft = np.asarray(f_eval(t), dtype=np.float64)
    floored = _snapped_floor(fs * ft)
    if spec.variant == "u":
        result = floored
    else:
        exponent = 0.5 if spec.variant == "k" else 0.5 + spec.epsilon
        # f vanishes at t = 1; the kernel is 0 there since the floor is 0,
        # so the negative power is only ever applied where it is finite.
        # One power of the product keeps evaluation exactly symmetric.
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = floored * (fs * ft) ** -exponent
        result = np.where(floored == 0.0, 0.0, scaled)
    if result.ndim == 0:
        return float(result)
    return result


@dataclass(frozen=True)
class QuadratureGrid:
    """Composite Gauss-Legendre nodes/weights on [lo, 1], graded toward lo.

    The mesh is x_m = lo + (1 - lo) * (m / cells)^grading, which crowds
    cells near lo; with grading >= 1/eps the t^(-(1-2eps)) edge integrand
    is resolved to two-grid accuracy.
    """

    cells_per_axis: int
    grading: float
    lo: float = 0.0
    order: int = GAUSS_ORDER
    nodes: np.ndarray = field(repr=False, default=None)
    weights: np.ndarray = field(repr=False, default=None)

    @staticmethod
    def build(cells_per_axis: int, grading: float, lo: float = 0.0,
              order: int = GAUSS_ORDER) -> "QuadratureGrid":
        if cells_per_axis < 1:
            raise ValueError(f"cells_per_axis must be >= 1, got {cells_per_axis}")
        if grading < 1.0:
            raise ValueError(f"grading must be >= 1, got {grading}")
        if not 0.0 <= lo < 1.0:
            raise ValueError(f"lo must be in [0, 1), got {lo}")
        edges = lo + (1.0 - lo) * (np.arange(cells_per_axis + 1) / cells_per_axis) ** grading
        gl_nodes, gl_weights = np.polynomial.legendre.leggauss(order)
        half_widths = np.diff(edges) / 2.0
        midpoints = (edges[:-1] + edges[1:]) / 2.0
        nodes = (midpoints[:, None] + half_widths[:, None] * gl_nodes[None, :]).ravel()
        weights = (half_widths[:, None] * gl_weights[None, :]).ravel()
        return QuadratureGrid(cells_per_axis=cells_per_axis, grading=grading,
                              lo=lo, order=order, nodes=nodes, weights=weights)

    @staticmethod
    def for_epsilon(epsilon: float, cells_per_axis: int = DEFAULT_CELLS,
                    lo: float = 0.0) -> "QuadratureGrid":
        """Grid graded hard enough for the k_eps edge singularity."""
        if not 0.0 < epsilon < 0.5:
            raise ValueError(f"epsilon must be in (0, 0.5), got {epsilon}")
        # Grading beyond ~40 pushes the innermost nodes so close to 0 that
        # f(s)f(t) overflows; below 1/eps the two-grid flag reports the
        # resulting under-resolution instead of silent garbage.
        grading = max(2.0, min(1.0 / epsilon, 40.0))
        return QuadratureGrid.build(cells_per_axis, grading, lo=lo)

    def refined(self) -> "QuadratureGrid":
        return QuadratureGrid.build(2 * self.cells_per_axis, self.grading,
                                    lo=self.lo, order=self.order)


def quad2d(func, grid: QuadratureGrid) -> float:
    """Tensor-product quadrature of func(s, t) over the grid's square."""
    values = func(grid.nodes[:, None], grid.nodes[None, :])
    return float(grid.weights @ values @ grid.weights)


@dataclass(frozen=True)
class HsNormResult:
    """An HS norm plus its two-grid error estimate."""

    value: float
    two_grid_error: float
    flagged: bool

    def __float__(self) -> float:
        return self.value


def hs_norm(spec: KernelSpec, grid: QuadratureGrid) -> HsNormResult:
    """Hilbert-Schmidt norm of k_eps by graded composite quadrature.

    Computed on the given grid and once more on its refinement; the
    refined value is returned, with |refined - coarse| as the error
    estimate.  Estimates above 5% of the value are flagged.
    """
    if spec.variant != "k_eps":
        raise ValueError(f"hs_norm requires variant k_eps, got {spec.variant!r}")
    if not 0.0 < spec.epsilon < 0.5:
        raise ValueError(
            f"square-integrability needs epsilon in (0, 0.5), got {spec.epsilon}")

    def squared(s, t):
        return kernel_eval(spec, s, t) ** 2

    coarse = np.sqrt(quad2d(squared, grid))
    fine = np.sqrt(quad2d(squared, grid.refined()))
    estimate = abs(fine - coarse)
    return HsNormResult(value=float(fine), two_grid_error=float(estimate),
                        flagged=bool(estimate > 0.05 * abs(fine)))


def bound_integral(epsilon: float) -> float:
    """Closed form of int_0^1 f(s)^(1-2 eps) ds.

    The left branch contributes (1/2) * 1/(2 eps) = 1/(4 eps) and the
    right branch (1/2) * 1/(2 - 2 eps) = 1/(4(1 - eps)); as eps -> 0 the
    total behaves like 1/(4 eps).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return 1.0 / (4.0 * epsilon) + 1.0 / (4.0 * (1.0 - epsilon))


def hs_distance_truncated(eps1: float, eps2: float | None, delta: float,
                          cells_per_axis: int = DEFAULT_CELLS) -> float:
    """L2 distance between k_eps1 and k_eps2 (None meaning k) on [delta, 1]^2.

    Truncation keeps the distance finite without settling whether the
    full-domain limit exists; callers scan a range of delta values and
    report the trend.
    """
    if not 0.0 < delta < 0.25:
        raise ValueError(f"delta must be in (0, 0.25), got {delta}")
    if eps1 <= 0:
        raise ValueError(f"eps1 must be > 0, got {eps1}")
    if eps2 is not None and eps2 <= 0:
        raise ValueError(f"eps2 must be > 0 or the zero marker, got {eps2}")
    first = KernelSpec("k_eps", eps1)
    second = KernelSpec("k") if eps2 is None else KernelSpec("k_eps", eps2)
    # No edge singularity survives the truncation; a mild grading still
    # concentrates cells where the kernels are largest.
    grid = QuadratureGrid.build(cells_per_axis, 2.0, lo=delta)

    def squared_difference(s, t):
        return (kernel_eval(first, s, t) - kernel_eval(second, s, t)) ** 2

    return float(np.sqrt(quad2d(squared_difference, grid)))


def discretization_check(n: int) -> float:
    """Max-abs gap between the sampled kernel k and the matrix K on its grid.

    Both sides come from the same formula, so the gap is pure floating
    point noise and must stay below 1e-12.
    """
    u_matrix = build_U_kernel_indexed(n)
    root = (u_matrix.shape[0] + 1) // 2
    points = np.arange(1, 2 * root) / (2.0 * root)
    sampled = kernel_eval(KernelSpec("k"), points[:, None], points[None, :])
    matrix = build_K(n, u_matrix, kernel_grid(n))
    return float(np.max(np.abs(sampled - matrix)))
