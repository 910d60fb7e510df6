"""Closure-enumeration kernels: compiled extension with pure-Python fallback.

The compiled kernel is preferred when it built; `CONCEPTPROBE_PURE=1` in the
environment forces the fallback. `ACTIVE_IMPL` names what was selected.
"""

import os

from . import _closure_py

_IMPLS = {"python": _closure_py.enumerate_closed_extents}

try:
    from . import _closure_c

    _IMPLS["c"] = _closure_c.enumerate_closed_extents
except ImportError:
    _closure_c = None

if os.environ.get("CONCEPTPROBE_PURE"):
    ACTIVE_IMPL = "python"
else:
    ACTIVE_IMPL = "c" if "c" in _IMPLS else "python"

enumerate_closed_extents = _IMPLS[ACTIVE_IMPL]


def available_implementations():
    """Map of implementation name -> enumeration callable, for benchmarks."""
    return dict(_IMPLS)
