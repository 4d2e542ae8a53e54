"""Backend selection for the numeric hot loops.

The compiled extension is preferred when present.  MAGNITUDE_BACKEND
overrides: "compiled" demands the extension (ImportError if missing),
"python" forces the numpy fallback.
"""

import os

_requested = os.environ.get("MAGNITUDE_BACKEND", "").strip().lower()
if _requested not in ("", "compiled", "python"):
    raise ImportError(
        f"MAGNITUDE_BACKEND={_requested!r}: expected 'compiled' or 'python'"
    )

if _requested == "python":
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _pykernels as _impl

        BACKEND = "python"

exp_kernel = _impl.exp_kernel
residual_inf = _impl.residual_inf
compensated_sum = _impl.compensated_sum
lattice_sum = _impl.lattice_sum
