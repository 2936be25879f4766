"""Kernel selection: compiled extension when available, pure Python otherwise.

Set CKKIT_PURE_PYTHON=1 to force the fallback (used by the benchmark and
for debugging).
"""

import os

from . import _evalpy

if os.environ.get("CKKIT_PURE_PYTHON"):
    eval_programs = _evalpy.eval_programs
    BACKEND = "python"
else:
    try:
        from ._evalcore import eval_programs  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        eval_programs = _evalpy.eval_programs
        BACKEND = "python"

__all__ = ["eval_programs", "BACKEND"]
