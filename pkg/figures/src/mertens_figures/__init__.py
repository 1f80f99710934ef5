"""SVG renderings of eigenvalue sweeps and eigenvector sidecars.

Purely presentational: the modules read the CSV and sidecar text formats
written by the mertens-spectra command line and map columns onto axes.
Nothing here recomputes mathematics, and the output is deterministic so
figures can be diffed byte for byte.
"""

__version__ = "0.1.0"
