"""Dense numerical kernels with deterministic conventions.

Floating-point factorizations and eigensolves are delegated to LAPACK via
scipy; what this module adds is the glue the rest of the package relies on:
strict input validation, a fixed eigenvalue ordering and eigenvector sign
convention so repeated runs produce byte-identical downstream records, and
an exact rational route for the all-ones solve that shares no code with the
float path.

The rational solver is fraction-free Bareiss elimination on Python integers
followed by Fraction back-substitution.  It exists as a cross-check: the
float LU result is only trusted where it agrees with this exact route, so
the two must stay independent.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .sieve import CapacityError

# Exact rational elimination is cubic with growing integers; past a few
# hundred rows it stops being a cheap cross-check.
RATIONAL_DIM_CAP = 512

_PIVOT_FLOOR = 1e-300


class SingularMatrixError(Exception):
    """Elimination hit an exactly zero (or denormal) pivot."""


class NonConvergenceError(Exception):
    """The iterative eigensolver failed to converge."""


@dataclass(frozen=True)
class LUFactorization:
    """Opaque handle around a pivoted LU factorization."""

    lu: np.ndarray
    piv: np.ndarray
    dim: int


@dataclass(frozen=True)
class SpectrumResult:
    """Leading eigenvalues (and optionally eigenvectors) of a symmetric matrix.

    eigenvalues  descending by |value|, ties broken toward the positive one
    eigenvectors columns matching eigenvalues, largest-|entry| made positive
    residuals    ||A v - lambda v||_2 per returned pair
    """

    dim: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray


def _require_square(a: np.ndarray) -> int:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a.shape[0]


def lu_factor(a: np.ndarray) -> LUFactorization:
    """Partial-pivoting LU with an explicit singularity check."""
    a = np.asarray(a, dtype=np.float64)
    dim = _require_square(a)
    with warnings.catch_warnings():
        # LAPACK getrf reports a zero pivot as a warning; we promote it.
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(a)
    diag = np.abs(np.diagonal(lu))
    if diag.min() < _PIVOT_FLOOR:
        position = int(np.argmin(diag)) + 1
        raise SingularMatrixError(
            f"zero pivot at elimination step {position} of {dim}")
    return LUFactorization(lu=lu, piv=piv, dim=dim)


def solve(factorization: LUFactorization, b: np.ndarray) -> np.ndarray:
    """Solve A x = b (vector or matrix right-hand side) from a prior LU."""
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != factorization.dim:
        raise ValueError(
            f"right-hand side has {b.shape[0]} rows, expected {factorization.dim}")
    return scipy.linalg.lu_solve((factorization.lu, factorization.piv), b)


def sym_eig(a: np.ndarray, top_k: int, want_vectors: bool = True) -> SpectrumResult:
    """Leading top_k eigenpairs of an exactly symmetric matrix.

    Ordering is by |eigenvalue| descending, ties broken by signed value
    descending.  Each returned eigenvector is normalized so its
    largest-magnitude component (first such index on exact ties) is
    positive; with that, identical inputs give bit-identical outputs.
    """
    a = np.asarray(a, dtype=np.float64)
    dim = _require_square(a)
    if not (a == a.T).all():
        raise ValueError("matrix is not exactly symmetric")
    if not 1 <= top_k <= dim:
        raise ValueError(f"top_k must be in 1..{dim}, got {top_k}")
    try:
        values, vectors = scipy.linalg.eigh(a)
    except scipy.linalg.LinAlgError as exc:
        raise NonConvergenceError(str(exc)) from exc
    order = np.lexsort((-values, -np.abs(values)))[:top_k]
    values = values[order].copy()
    vectors = vectors[:, order].copy()
    for col in range(vectors.shape[1]):
        v = vectors[:, col]
        lead = int(np.argmax(np.abs(v)))
        if v[lead] < 0:
            vectors[:, col] = -v
    residuals = np.linalg.norm(a @ vectors - vectors * values, axis=0)
    return SpectrumResult(
        dim=dim,
        eigenvalues=values,
        eigenvectors=vectors if want_vectors else None,
        residuals=residuals,
    )


def spectral_norm(a: np.ndarray) -> float:
    """Largest |eigenvalue| of a symmetric matrix."""
    return float(abs(sym_eig(a, 1, want_vectors=False).eigenvalues[0]))


def frobenius_norm(a: np.ndarray) -> float:
    """Entrywise 2-norm; no symmetry requirement."""
    return float(np.linalg.norm(np.asarray(a, dtype=np.float64), "fro"))


def _to_int_matrix(a: np.ndarray, dim_cap: int) -> list[list[int]]:
    arr = np.asarray(a)
    dim = _require_square(arr)
    if dim > dim_cap:
        raise CapacityError(f"rational solve limited to dim {dim_cap}, got {dim}")
    if np.issubdtype(arr.dtype, np.floating):
        rounded = np.rint(arr)
        if not (arr == rounded).all():
            raise ValueError("rational solve requires integer-valued entries")
        arr = rounded
    return [[int(arr[i, j]) for j in range(dim)] for i in range(dim)]


def rational_solve(a: np.ndarray, b: list[int] | np.ndarray,
                   dim_cap: int = RATIONAL_DIM_CAP) -> list[Fraction]:
    """Exact solution of an integer system via fraction-free elimination.

    Bareiss two-step division keeps intermediate entries as true integers
    (each division is exact), avoiding both float error and the coefficient
    blowup of naive Fraction Gaussian elimination.  Back-substitution then
    runs in Fraction arithmetic on the integer echelon form.
    """
    rows = _to_int_matrix(a, dim_cap)
    dim = len(rows)
    rhs = [int(x) for x in np.asarray(b).tolist()]
    if len(rhs) != dim:
        raise ValueError(f"right-hand side has {len(rhs)} rows, expected {dim}")
    m = [rows[i] + [rhs[i]] for i in range(dim)]

    previous_pivot = 1
    for k in range(dim):
        pivot_row = next((r for r in range(k, dim) if m[r][k] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError(f"exactly singular at column {k + 1}")
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
        pivot = m[k][k]
        for r in range(k + 1, dim):
            factor = m[r][k]
            row_r = m[r]
            row_k = m[k]
            for c in range(k, dim + 1):
                # Exact by Sylvester's identity; the quotient is an integer.
                row_r[c] = (pivot * row_r[c] - factor * row_k[c]) // previous_pivot
        previous_pivot = pivot

    solution: list[Fraction] = [Fraction(0)] * dim
    for i in range(dim - 1, -1, -1):
        acc = Fraction(m[i][dim])
        for j in range(i + 1, dim):
            acc -= m[i][j] * solution[j]
        solution[i] = acc / m[i][i]
    return solution


def rational_solve_allones(a: np.ndarray,
                           dim_cap: int = RATIONAL_DIM_CAP) -> Fraction:
    """Exact value of ones^T A^{-1} ones for an integer matrix A."""
    dim = np.asarray(a).shape[0]
    solution = rational_solve(a, [1] * dim, dim_cap=dim_cap)
    return sum(solution, Fraction(0))
