"""Build the optional compiled kernels.

If Cython or a C compiler is missing the package still installs and falls back
to the NumPy implementations in ``coherent_amp._purepy``.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("COHERENT_AMP_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "coherent_amp._kernels",
            ["src/coherent_amp/_kernels.pyx"],
            extra_compile_args=["-O3", "-fopenmp"],
            extra_link_args=["-fopenmp"],
            optional=True,
        )
        ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
