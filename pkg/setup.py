"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time); set MAGNITUDE_PURE_PYTHON=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MAGNITUDE_PURE_PYTHON") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext = Extension(
            "magnitude._ckernels",
            ["src/magnitude/_ckernels.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=["-O3"],
        )
        ext_modules = cythonize([ext], language_level=3)
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
