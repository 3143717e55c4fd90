import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("STALLINGS_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("stallings._speedups", ["src/stallings/_speedups.pyx"])],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
