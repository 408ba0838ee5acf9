"""Hot geometric kernels with a compiled fast path.

The compiled extension (`_core`, built from Cython) and the pure-numpy
reference (`_ref`) implement the same contracts; `LENSFOLD_PURE_PYTHON=1`
forces the reference implementation, otherwise the extension is used when
the build produced one.
"""

import os

if os.environ.get("LENSFOLD_PURE_PYTHON"):
    from . import _ref as _impl
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _ref as _impl
        BACKEND = "python"

segments_cross_polyline = _impl.segments_cross_polyline
tri_tri_overlap = _impl.tri_tri_overlap

__all__ = ["BACKEND", "segments_cross_polyline", "tri_tri_overlap"]
