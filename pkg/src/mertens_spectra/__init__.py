"""Mertens-related matrix families: exact identities, spectra, kernel estimates.

The package is organized around one central object: for n a perfect square,
the set S of distinct values of floor(n/k) indexes a symmetric integer matrix
U with entries floor(n / (s_i * s_j)).  Everything else derives from U:
a diagonal preconditioning that turns it into the symmetric form K, the
inverse-side matrices K^-1 and M_n whose entries reproduce the Mertens
function, and a continuum kernel whose Hilbert-Schmidt norms bound the
regularized family.

Modules
-------
sieve                 Mobius/Mertens tables and divisor-quotient value sets.
matrix_builder        Constructors for U, T, K, K^-1, M_n and weight vectors.
dense_linalg          LU solves, symmetric eigensolves, exact rational solve.
kernel_ops            The profile f, kernels u/k/k_eps, quadrature, HS norms.
spectral_experiments  Identity verification, sweeps, overlays, probes.
cli                   Command-line front end and all on-disk formats.
"""

from .sieve import (
    CapacityError,
    DivisorValueSet,
    MertensTable,
    build_mertens_table,
    divisor_value_set,
    mertens_at,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DivisorValueSet",
    "MertensTable",
    "build_mertens_table",
    "divisor_value_set",
    "mertens_at",
    "__version__",
]
