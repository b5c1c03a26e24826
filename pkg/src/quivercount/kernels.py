"""Row-reduction kernels: compiled when available, pure Python otherwise.

Set ``QUIVERCOUNT_PURE=1`` to force the Python fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
rref_mod_p = _kernels_py.rref_mod_p
rref_table = _kernels_py.rref_table
matmul_mod_p = _kernels_py.matmul_mod_p
matmul_table = _kernels_py.matmul_table

if not os.environ.get("QUIVERCOUNT_PURE"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        rref_mod_p = _compiled.rref_mod_p
        rref_table = _compiled.rref_table
        matmul_mod_p = _compiled.matmul_mod_p
        matmul_table = _compiled.matmul_table
        BACKEND = "compiled"

__all__ = ["BACKEND", "matmul_mod_p", "matmul_table", "rref_mod_p", "rref_table"]
