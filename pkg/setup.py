"""Builds the optional compiled kernels; the package works without them."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("DYBER_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(["src/dyber/_ckernels.pyx"], compiler_directives={"language_level": "3"}, quiet=True)

setup(ext_modules=ext_modules)
