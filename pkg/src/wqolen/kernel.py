"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``WQOLEN_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("WQOLEN_PURE_PYTHON"):
    from . import _kernel_py as impl

    COMPILED = False
else:
    try:
        from . import _kernel as impl

        COMPILED = True
    except ImportError:  # extension not built
        from . import _kernel_py as impl

        COMPILED = False

leq = impl.leq
norm = impl.norm
avoiding = impl.avoiding
longest_bad = impl.longest_bad

__all__ = ["COMPILED", "impl", "leq", "norm", "avoiding", "longest_bad"]
