import os

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and os.path.exists("src/gershoq/_kernels/_speed.pyx"):
    ext_modules = cythonize(
        [
            Extension(
                "gershoq._kernels._speed",
                ["src/gershoq/_kernels/_speed.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

# The compiled kernel is optional: gershoq._kernels falls back to the pure
# backend when the extension is absent.
setup(ext_modules=ext_modules)
