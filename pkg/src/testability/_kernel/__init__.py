"""Simplex inner-loop kernels.

The compiled ``_ckernel`` extension is used when it was built; otherwise the
pure-Python ``_pykernel`` takes over.  Set ``TESTABILITY_PURE_PYTHON=1`` to
force the fallback.
"""
import os

from . import _pykernel

BACKEND = "python"
_impl = _pykernel

if not os.environ.get("TESTABILITY_PURE_PYTHON"):
    try:
        from . import _ckernel as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

f_entering = _impl.f_entering
f_entering_dantzig = _impl.f_entering_dantzig
f_leaving = _impl.f_leaving
f_leaving_harris = _impl.f_leaving_harris
f_pivot = _impl.f_pivot
q_entering = _impl.q_entering
q_leaving = _impl.q_leaving
q_pivot = _impl.q_pivot


def get_backend(name: str):
    """Return the kernel module called ``name`` (``"python"`` or ``"cython"``)."""
    if name == "python":
        return _pykernel
    if name == "cython":
        from . import _ckernel

        return _ckernel
    raise ValueError(f"unknown kernel backend {name!r}")
