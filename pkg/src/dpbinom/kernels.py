"""Select the compiled kernels when available, else the pure-Python ones.

Set ``DPBINOM_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_compiled = None

if os.environ.get("DPBINOM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    BACKEND = "cython"
    gibbs_chain = _compiled.gibbs_chain
    tail_counts = _compiled.tail_counts
else:
    gibbs_chain = _kernels_py.gibbs_chain
    tail_counts = _kernels_py.tail_counts


def backends():
    """Mapping of every importable backend name to its module."""
    found = {"python": _kernels_py}
    if _compiled is not None:
        found["cython"] = _compiled
    else:
        try:
            from . import _kernels
            found["cython"] = _kernels
        except ImportError:
            pass
    return found
