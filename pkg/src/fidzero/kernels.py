"""Backend dispatch for the hot kernels.

The numba path is the default; set FIDZERO_DISABLE_NUMBA=1 to force the
pure-numpy fallback (used by the benchmark and as a safety hatch).
"""

import os

_flag = os.environ.get("FIDZERO_DISABLE_NUMBA", "").strip()
_want_numba = _flag in ("", "0")

if _want_numba:
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:  # numba missing or broken: degrade silently
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"
else:
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"

spin_tables = _impl.spin_tables
sector_positions = _impl.sector_positions
projected_flip_rows = _impl.projected_flip_rows
matvec = _impl.matvec


def backend_name() -> str:
    return BACKEND
