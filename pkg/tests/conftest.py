import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for the oracle helpers

from hofq import _kernels_py

try:
    from hofq import _kernels
    _BACKENDS = [_kernels_py, _kernels]
except ImportError:
    _BACKENDS = [_kernels_py]


@pytest.fixture(params=_BACKENDS, ids=lambda m: m.IMPLEMENTATION)
def kernel_backend(request):
    """Both kernel implementations when the extension is built."""
    return request.param
