"""Constructors for the divisor-quotient matrix family.

For n = r*r and S its divisor-quotient value set (ascending, |S| = 2r - 1),
the base object is the symmetric integer matrix

    U[i, j] = floor(n / (s_i * s_j)).

Derived from it:

    T      0/1 matrix with ones on and above the antidiagonal
    d, w   d_k = sqrt(n)/s_k and w = d^(-1/2), plus the all-ones vector
    K      D^(-1/2) U D^(-1/2), the symmetrically preconditioned form
    K^-1   D^(1/2) U^-1 D^(1/2)
    M_n    T U^-1 T, whose entries are Mertens values of the quotients

There is a second route to U that never mentions S: sample the product
profile f (see kernel_ops) on the uniform grid i/(2r) and floor it.  Both
routes are provided; agreement between them is one of the verified
identities, so each builder keeps its arithmetic exact (integer, not float)
up to the final cast.

Derived float matrices are explicitly symmetrized as (A + A^T)/2 before
being returned, because downstream eigensolves require exact symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .dense_linalg import LUFactorization, lu_factor, solve
from .sieve import CapacityError, DivisorValueSet

# Dim 4001 corresponds to n around 4e6; past that the dense O(dim^3)
# routines stop being interactive.  Overridable per call and via the CLI.
DEFAULT_DIM_CAP = 4001


def _check_dim(dim: int, dim_cap: int | None) -> None:
    cap = DEFAULT_DIM_CAP if dim_cap is None else dim_cap
    if dim > cap:
        raise CapacityError(f"matrix dimension {dim} exceeds cap {cap}")


def _require_square_input(n: int) -> int:
    root = isqrt(n)
    if n < 1 or root * root != n:
        raise ValueError(f"n must be a positive perfect square, got {n}")
    return root


def symmetrize(a: np.ndarray) -> np.ndarray:
    """(A + A^T)/2, forcing exact symmetry onto a nearly symmetric array."""
    return (a + a.T) / 2.0


def build_U_s_indexed(n: int, s_set: DivisorValueSet,
                      dim_cap: int | None = None) -> np.ndarray:
    """U[i, j] = floor(n / (s_i * s_j)) over ascending S, as float64.

    Entries are computed in int64 (products s_i * s_j reach n^2, so 64-bit
    is required up to the default cap) and cast at the end; every entry is
    an exact small integer, representable without rounding.
    """
    if s_set.n != n:
        raise ValueError(f"value set was built for n={s_set.n}, not n={n}")
    values = s_set.values
    _check_dim(values.shape[0], dim_cap)
    products = np.multiply.outer(values, values)
    return (n // products).astype(np.float64)


def kernel_grid_fractions(n: int) -> list[tuple[int, int]]:
    """f(i/(2r)) for i = 1..2r-1 as exact (numerator, denominator) pairs.

    On the left half of (0, 1] the profile is 1/(2t), so f(i/(2r)) = r/i;
    on the right half it is 2(1 - t), so f(i/(2r)) = (2r - i)/r.
    """
    root = _require_square_input(n)
    pairs: list[tuple[int, int]] = []
    for i in range(1, 2 * root):
        if i <= root:
            pairs.append((root, i))
        else:
            pairs.append((2 * root - i, root))
    return pairs


def kernel_grid(n: int) -> np.ndarray:
    """Float values of the profile on the uniform grid i/(2r), i = 1..2r-1."""
    pairs = kernel_grid_fractions(n)
    return np.array([num / den for num, den in pairs], dtype=np.float64)


def build_U_kernel_indexed(n: int, dim_cap: int | None = None) -> np.ndarray:
    """U[i, j] = floor(f(i/(2r)) * f(j/(2r))) via exact integer arithmetic.

    Floats are avoided until the final cast: the grid values are rationals
    with denominator i or r, and flooring their float product can land one
    short exactly when the true product is an integer.
    """
    root = _require_square_input(n)
    _check_dim(2 * root - 1, dim_cap)
    pairs = kernel_grid_fractions(n)
    numerators = np.array([p[0] for p in pairs], dtype=np.int64)
    denominators = np.array([p[1] for p in pairs], dtype=np.int64)
    num_products = np.multiply.outer(numerators, numerators)
    den_products = np.multiply.outer(denominators, denominators)
    return (num_products // den_products).astype(np.float64)


def build_T(dim: int, dim_cap: int | None = None) -> np.ndarray:
    """0/1 matrix with ones where i + j <= dim + 1 (1-based indices)."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    _check_dim(dim, dim_cap)
    idx = np.arange(dim)
    return (np.add.outer(idx, idx) <= dim - 1).astype(np.float64)


@dataclass(frozen=True)
class WeightVectors:
    """The diagonal weights d_k = sqrt(n)/s_k and companions w, u."""

    n: int
    d: np.ndarray
    w: np.ndarray
    u: np.ndarray

    @property
    def w_norm_sq(self) -> float:
        return float(self.w @ self.w)


def build_weights(n: int, s_set: DivisorValueSet) -> WeightVectors:
    """d = sqrt(n)/s over ascending S, w = d^(-1/2), u = all-ones."""
    if s_set.n != n:
        raise ValueError(f"value set was built for n={s_set.n}, not n={n}")
    d = np.sqrt(float(n)) / s_set.values.astype(np.float64)
    w = d ** -0.5
    u = np.ones_like(d)
    return WeightVectors(n=n, d=d, w=w, u=u)


def _check_diag(u: np.ndarray, d: np.ndarray) -> None:
    if u.shape[0] != u.shape[1] or u.shape[0] != d.shape[0]:
        raise ValueError(
            f"shape mismatch: matrix {u.shape} against diagonal {d.shape}")
    if (d <= 0).any():
        raise ValueError("diagonal weights must be strictly positive")


def build_K(n: int, u_matrix: np.ndarray, d: np.ndarray) -> np.ndarray:
    """K = D^(-1/2) U D^(-1/2), explicitly symmetrized."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_diag(u_matrix, d)
    scale = d ** -0.5
    return symmetrize(u_matrix * np.multiply.outer(scale, scale))


def build_K_inverse(n: int, u_matrix: np.ndarray, d: np.ndarray,
                    lu: LUFactorization | None = None) -> np.ndarray:
    """K^-1 = D^(1/2) U^-1 D^(1/2) from one LU factorization of U."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_diag(u_matrix, d)
    if lu is None:
        lu = lu_factor(u_matrix)
    u_inverse = solve(lu, np.eye(u_matrix.shape[0]))
    scale = d ** 0.5
    return symmetrize(u_inverse * np.multiply.outer(scale, scale))


def build_M(n: int, u_matrix: np.ndarray, t_matrix: np.ndarray,
            lu: LUFactorization | None = None) -> np.ndarray:
    """M_n = T U^-1 T, explicitly symmetrized."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if u_matrix.shape != t_matrix.shape:
        raise ValueError(
            f"shape mismatch: U {u_matrix.shape} against T {t_matrix.shape}")
    if lu is None:
        lu = lu_factor(u_matrix)
    return symmetrize(t_matrix @ solve(lu, t_matrix))
