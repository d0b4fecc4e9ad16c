"""Build script: compiles the optional LSTM kernel extension.

The package is fully functional without the extension (a pure-numpy
backend is selected at import time), so a missing compiler or Cython
must not fail the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class optional_build_ext(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, header problems, ...
            warnings.warn(f"compiled kernels skipped ({exc}); pure-numpy backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernels skipped ({exc}); pure-numpy backend will be used")


def extension_modules():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "loadcast.lstm._kernels",
        sources=["src/loadcast/lstm/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extension_modules(),
    cmdclass={"build_ext": optional_build_ext},
)
