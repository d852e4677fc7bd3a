import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tcwavelets._interp_cy",
                ["src/tcwavelets/_interp_cy.pyx"],
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    # pure-Python install still works; tcwavelets.interp falls back to numpy
    ext_modules = []

setup(ext_modules=ext_modules)
