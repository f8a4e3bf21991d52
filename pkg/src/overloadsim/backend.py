"""Step-kernel backend selection.

Two interchangeable kernels exist: a compiled Cython extension and a pure
numpy implementation. They produce bitwise-identical results; the compiled
one is simply faster. Selection happens once at import time and can be
forced with the SIM_BACKEND environment variable:

    SIM_BACKEND=auto      prefer compiled, fall back to python (default)
    SIM_BACKEND=compiled  require the compiled extension, error if missing
    SIM_BACKEND=python    force the pure numpy kernel
"""
import os

from . import _kernels_py


def _select():
    choice = os.environ.get("SIM_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "compiled", "python"):
        raise RuntimeError(
            f"SIM_BACKEND must be one of auto, compiled, python; got {choice!r}"
        )
    if choice == "python":
        return _kernels_py
    try:
        from . import _kernels
    except ImportError:
        if choice == "compiled":
            raise RuntimeError(
                "SIM_BACKEND=compiled but the compiled extension is not "
                "available; reinstall with a C compiler or use SIM_BACKEND=python"
            )
        return _kernels_py
    return _kernels


_impl = _select()

step_kernel = _impl.step_kernel
BACKEND_NAME = _impl.BACKEND_NAME


def available_backends():
    """Names of the kernels importable in this installation."""
    names = []
    try:
        from . import _kernels  # noqa: F401
        names.append("compiled")
    except ImportError:
        pass
    names.append("python")
    return names
