"""Build script for the optional compiled elimination kernels.

The package is fully functional without the extension; steinberg.linalg
falls back to the pure-Python twin of the same algorithms at import time.
Set STEINBERG_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

extensions = []
if not os.environ.get("STEINBERG_NO_EXT"):
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "steinberg.linalg._core",
                    ["src/steinberg/linalg/_core.pyx"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython available: install as pure Python.
        extensions = []

setup(ext_modules=extensions)
