"""Build the optional compiled kernel core; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("DLPLAB_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("dlplab._kernels_ext", ["src/dlplab/_kernels_ext.pyx"],
                       include_dirs=[np.get_include()])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
