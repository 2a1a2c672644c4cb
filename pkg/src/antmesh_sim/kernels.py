"""Selects the compiled kernel extension when available, else the pure-Python
fallback. Set ANTMESH_PURE_PY=1 to force the fallback."""

import os

if os.environ.get("ANTMESH_PURE_PY"):
    from . import _kernels_py as _impl

    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl

        COMPILED = False

select_index = _impl.select_index
select_index_masked = _impl.select_index_masked
reinforce = _impl.reinforce
normalize = _impl.normalize
