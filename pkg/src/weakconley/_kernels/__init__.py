"""Hot kernels: compiled when the extension is built, numpy otherwise.

Set ``WEAKCONLEY_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python

compiled = None
if not os.environ.get("WEAKCONLEY_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else python
BACKEND = "compiled" if compiled is not None else "python"

trim_forward = _impl.trim_forward
reduce_mod_p = _impl.reduce_mod_p

__all__ = ["BACKEND", "compiled", "python", "reduce_mod_p", "trim_forward"]
