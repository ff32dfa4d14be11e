"""Pick the compiled kernels when they were built, else the numpy fallback.

Set ``RANEYLAB_PURE=1`` to force the fallback.
"""

import os

BACKEND = "python"
if os.environ.get("RANEYLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._core import hermitian_eigh  # noqa: F401
        BACKEND = "compiled"
    except ImportError:
        pass
if BACKEND == "python":
    from ._pycore import hermitian_eigh  # noqa: F401

__all__ = ["BACKEND", "hermitian_eigh"]
