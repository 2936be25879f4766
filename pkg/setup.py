"""Builds the optional compiled evaluation kernel.

The package works without it (a pure-Python kernel is selected at import
time), but the countermodel-search and soundness suites are much faster
with the extension.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("ckkit._kernel._evalcore", ["src/ckkit/_kernel/_evalcore.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
