"""Hot integer kernels with two interchangeable backends.

The numba backend JIT-compiles the union-find component labeling and the
base-vertex symmetry extension; the numpy backend covers the same contracts with
scipy.sparse.csgraph and vectorized indexing. Selection:

* ``MANIPLEX_BACKEND=numpy`` forces the fallback,
* ``MANIPLEX_BACKEND=numba`` (or unset) prefers numba, falling back silently if
  numba cannot be imported.

Both backends are deterministic and bit-identical in output; see
benchmarks/bench_kernels.py for a speed comparison.
"""

from __future__ import annotations

import os

_requested = os.environ.get("MANIPLEX_BACKEND", "numba").strip().lower()

if _requested == "numpy":
    from . import _numpy_impl as _impl

    _BACKEND = "numpy"
else:
    try:
        from . import _numba_impl as _impl

        _BACKEND = "numba"
    except ImportError:
        from . import _numpy_impl as _impl

        _BACKEND = "numpy"

component_labels = _impl.component_labels
extend_candidates = _impl.extend_candidates


def backend_name() -> str:
    return _BACKEND


__all__ = ["component_labels", "extend_candidates", "backend_name"]
