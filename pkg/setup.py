"""Builds the optional compiled scan kernel; the package works without it."""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    pass
else:
    ext_modules = cythonize(
        [Extension("helpkit._scan", ["src/helpkit/_scan.pyx"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )

setup(ext_modules=ext_modules)
