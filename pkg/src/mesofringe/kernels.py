"""Backend selection for the hot kernels.

The compiled extension is preferred when it imported cleanly; setting the
environment variable ``MESOFRINGE_PURE_PYTHON=1`` forces the NumPy fallback
(useful for benchmarking the two against each other).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("MESOFRINGE_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

volterra_trapezoid = _impl.volterra_trapezoid
angular_average_grid = _impl.angular_average_grid


def backend() -> str:
    """Name of the kernel backend in use: 'compiled' or 'python'."""
    return BACKEND
