"""Build script: compiles the optional verification kernels.

The package is pure Python plus one optional Cython extension
(``finitegauge._kernels._fast``).  If Cython or a C compiler is missing
the build silently falls back to the pure-Python kernels; nothing in the
library requires the extension.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Treat extension build failures as a downgrade, not an error."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"warning: building the compiled kernels failed ({exc}); "
              "falling back to the pure-Python kernels")


ext_modules = []
if not os.environ.get("FINITEGAUGE_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "finitegauge._kernels._fast",
                    ["src/finitegauge/_kernels/_fast.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
