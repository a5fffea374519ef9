"""Hot kernels with a compiled core and a numpy fallback.

The Cython extension ``_ckernels`` is used when it imports; otherwise the
pure implementation in ``_pykernels`` is used.  Setting the environment
variable ``HODNET_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels as pure

compiled = None
if not os.environ.get("HODNET_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else pure

BACKEND = _impl.NAME
gf2_power_table = _impl.gf2_power_table
gf2_span = _impl.gf2_span
circulant_direct = _impl.circulant_direct
kernel_pair_sum = _impl.kernel_pair_sum


def backends():
    """Available kernel modules, compiled first."""
    return [k for k in (compiled, pure) if k is not None]
