"""Build the optional Cython kernel.

    pip install -e . --no-build-isolation     # or
    python setup.py build_ext --inplace

If Cython or a compiler is missing the package still installs and runs on
the pure-Python kernel.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("HEXMOB_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "hexmob._ckernel",
                    ["src/hexmob/_ckernel.pyx"],
                    include_dirs=[np.get_include()],
                    # keep IEEE semantics identical to the Python fallback
                    extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
