"""Select the vote-kernel backend at import time.

The compiled kernels (``platefuse._kernels``) are preferred when the
extension was built; otherwise the pure-Python twin is used. Set
PLATEFUSE_PURE_PYTHON=1 to force the fallback (useful for benchmarking and
debugging). Both backends are behaviorally identical.
"""

import os

from . import _kernels_py

if os.environ.get("PLATEFUSE_PURE_PYTHON") == "1":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"
    else:
        kernels = _compiled
        BACKEND = "compiled"


def backend_name() -> str:
    """Name of the kernel backend in use: 'compiled' or 'python'."""
    return BACKEND
