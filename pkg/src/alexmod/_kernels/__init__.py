"""Kernel selection: compiled row reduction when available, pure Python otherwise.

Set ALEXMOD_PURE=1 to force the pure implementation (used by the benchmark
and by the test suite to exercise both backends).
"""

import os

if os.environ.get("ALEXMOD_PURE"):
    from . import qla_py as _impl
else:
    try:
        from . import qla_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import qla_py as _impl

BACKEND = _impl.BACKEND
echelon = _impl.echelon
rank = _impl.rank
rref = _impl.rref
nullspace = _impl.nullspace
