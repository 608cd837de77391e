"""Kernel selection: compiled extension when available, pure Python otherwise.

Set MCLEX_PURE_PYTHON=1 to force the fallback (used by the parity tests and
the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("MCLEX_PURE_PYTHON", "0") not in ("", "0"):
    from . import _closure_py as _impl
else:
    try:
        from . import _closure_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _closure_py as _impl

BACKEND = _impl.BACKEND
closure_mask = _impl.closure_mask
sharp_bits = _impl.sharp_bits
