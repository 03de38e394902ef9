"""Exact linear-algebra kernel with a compiled fast path.

The sparse integer operations (echelon, rank, nullspace) have two
implementations with identical semantics: a Cython extension and a pure-Python
fallback. The compiled one is used when it imports; set BOTTSAM_PURE=1 to
force the pure implementation. IMPLEMENTATION records which one is active.
"""

import os

from ._dense import determinant, invert_dense, kernel_lattice_basis, solve_dense

if os.environ.get("BOTTSAM_PURE") == "1":
    from ._echelon_py import echelon, normalize_row, nullspace, rank
    IMPLEMENTATION = "python"
else:
    try:
        from ._echelon_cy import echelon, normalize_row, nullspace, rank
        IMPLEMENTATION = "cython"
    except ImportError:
        from ._echelon_py import echelon, normalize_row, nullspace, rank
        IMPLEMENTATION = "python"

__all__ = [
    "IMPLEMENTATION",
    "determinant",
    "echelon",
    "invert_dense",
    "kernel_lattice_basis",
    "normalize_row",
    "nullspace",
    "rank",
    "solve_dense",
]
