"""Kernel backend selection: compiled Cython extension with a pure fallback.

Set GAROPACK_PURE=1 to force the pure numpy implementations (used by the
benchmark and by tests that compare the two backends).
"""

import os

from garopack.kernels import _pure

if os.environ.get("GAROPACK_PURE"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from garopack.kernels import _speedups as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

interval_oscillation_tables = _impl.interval_oscillation_tables
coverage_value_table = _impl.coverage_value_table

__all__ = ["BACKEND", "interval_oscillation_tables", "coverage_value_table"]
