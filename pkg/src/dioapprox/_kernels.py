"""Kernel selection: compiled extension when available, else pure Python.

Set DIOAPPROX_PURE=1 to force the fallback (used by the benchmark and the
equivalence tests).
"""

import os

if os.environ.get("DIOAPPROX_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

IMPL = _impl.IMPL
farey_unit = _impl.farey_unit
farey_unit_count = _impl.farey_unit_count
lll_reduce_f64 = _impl.lll_reduce_f64
aux_scan_batch = _impl.aux_scan_batch
roots_min_scan = _impl.roots_min_scan
roots_collect_near = _impl.roots_collect_near
