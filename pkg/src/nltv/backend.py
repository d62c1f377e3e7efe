"""Kernel backend selection.

The compiled extension is preferred when present; NLTV_BACKEND=numpy or
NLTV_BACKEND=cython forces a choice (the latter fails loudly if the
extension was not built). Call sites go through this module's attribute
so tests can swap backends at runtime.
"""

import os

_requested = os.environ.get("NLTV_BACKEND", "auto")

if _requested not in ("auto", "cython", "numpy"):
    raise ImportError(f"NLTV_BACKEND must be auto, cython or numpy, got {_requested!r}")

if _requested == "numpy":
    from . import _kernels_np as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "NLTV_BACKEND=cython but the compiled extension is not available; "
                "reinstall with a C compiler or drop the override"
            ) from None
        from . import _kernels_np as kernels


def backend_name():
    return kernels.BACKEND_NAME
