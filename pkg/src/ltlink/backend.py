"""Select the codec kernel implementation at import time.

The compiled extension is preferred; the numpy fallback is used when it
is missing.  ``LTLINK_BACKEND=pure|cython`` forces a choice (the bench
command uses this to time both).  Both implementations are bit-identical
by contract.
"""

from __future__ import annotations

import os

from . import _kernel_py

_forced = os.environ.get("LTLINK_BACKEND")

if _forced == "pure":
    _impl = _kernel_py
elif _forced == "cython":
    from . import _kernel as _impl  # noqa: F401  (ImportError is the right failure)
elif _forced is None:
    try:
        from . import _kernel as _impl
    except ImportError:
        _impl = _kernel_py
else:
    raise RuntimeError(f"LTLINK_BACKEND must be 'pure' or 'cython', got {_forced!r}")

BACKEND = _impl.BACKEND_NAME
build_graph_edges = _impl.build_graph_edges
decode_attempt = _impl.decode_attempt
session = _impl.session


def available_backends() -> dict:
    """Name -> module for every importable kernel implementation."""
    impls = {"pure": _kernel_py}
    try:
        from . import _kernel
        impls["cython"] = _kernel
    except ImportError:
        pass
    return impls
