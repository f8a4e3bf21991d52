"""Build script. The Cython kernel is optional: if Cython or a C compiler is
unavailable the package installs pure-Python and selects the numpy backend
at import time.
"""
import os

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy

    # -ffp-contract=off: forbid fused multiply-add so the compiled kernel
    # produces bit-identical floats to the numpy backend.
    # -fno-math-errno: drop the errno wrapper around sqrt so it inlines and
    # vectorizes; results stay correctly rounded IEEE-754 (inputs are >= 0).
    ext_modules = cythonize(
        "src/overloadsim/_kernels.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs = [numpy.get_include()]
        ext.extra_compile_args = ["-O3", "-ffp-contract=off", "-fno-math-errno"]
        ext.define_macros = [("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")]
except Exception as exc:  # pragma: no cover - build-environment dependent
    if os.environ.get("SIM_REQUIRE_COMPILED"):
        raise
    print(f"building without compiled kernel: {exc}")
    ext_modules = []

setup(ext_modules=ext_modules)
