"""Selects the compiled kernels when available, else the pure-Python ones.

Set STONEPROOFS_PURE=1 to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if not os.environ.get("STONEPROOFS_PURE"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

entails_masks = _impl.entails_masks
first_bad_resolvent = _impl.first_bad_resolvent
first_irregular = _impl.first_irregular
dpll = _impl.dpll

R_STANDARD = _kernels_py.R_STANDARD
R_DEGENERATE = _kernels_py.R_DEGENERATE
R_W = _kernels_py.R_W
KIND_AXIOM = _kernels_py.KIND_AXIOM
KIND_LEMMA = _kernels_py.KIND_LEMMA
KIND_INTERNAL = _kernels_py.KIND_INTERNAL


def implementations():
    """Both backends, for the benchmark and the parity tests."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
