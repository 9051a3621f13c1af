"""Kernel backend selection.

Imports the compiled extension when present, otherwise the pure-Python
fallback.  Set HOFQ_PURE=1 to force the fallback (useful for benchmarks and
for testing both paths).
"""

import os

from . import _kernels_py

if os.environ.get("HOFQ_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.IMPLEMENTATION

OK = _kernels_py.OK
DIED = _kernels_py.DIED
OVERFLOW = _kernels_py.OVERFLOW

one_term_trace = _impl.one_term_trace
two_term_trace = _impl.two_term_trace
