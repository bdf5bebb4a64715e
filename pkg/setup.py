"""Builds the optional compiled kernels.

The package works without them (a numpy fallback is selected at import);
set DFRTOK_NO_EXT=1 to skip compilation entirely, e.g. on machines without
a C toolchain:

    DFRTOK_NO_EXT=1 pip install -e .
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Degrade to the pure-Python fallback if compilation fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler/toolchain missing
            print(f"warning: compiled kernels skipped ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); using numpy fallback")


ext_modules = []
if os.environ.get("DFRTOK_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/dfrtok/_kernels_c.pyx"],
            language_level=3,
        )
    except ImportError:
        print("warning: Cython not available; using numpy fallback kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
