"""Kernel dispatch: compiled implementation when available, else pure.

``impl`` is the module the rest of the library calls into.  Set the
environment variable ``FINITEGAUGE_PURE`` (to anything non-empty) before
import to force the pure-Python kernels even when the extension is
built; ``BACKEND`` records which one won.
"""

import os

from . import pure

if os.environ.get("FINITEGAUGE_PURE"):
    impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _fast as impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        impl = pure
        BACKEND = "pure"

__all__ = ["impl", "pure", "BACKEND"]
