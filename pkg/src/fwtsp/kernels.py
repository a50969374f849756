"""Pick the kernel backend: the compiled extension when it imports, else the
pure-Python twin. Set FWTSP_PURE_PYTHON=1 to force the fallback."""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled


def default_backend() -> str:
    if os.environ.get("FWTSP_PURE_PYTHON") == "1" or _compiled is None:
        return "python"
    return "compiled"


def get(name: str | None = None):
    name = name or default_backend()
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available (have {sorted(BACKENDS)})") from None
