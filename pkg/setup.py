"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so any failure to build it is non-fatal.
"""
from setuptools import setup, Extension


def make_ext_modules():
    try:
        from Cython.Build import cythonize
        import numpy
    except ImportError:
        return []
    ext = Extension(
        "lensfold._kernels._core",
        sources=["src/lensfold/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=make_ext_modules())
