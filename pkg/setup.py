"""Build hook: compile the optional counting-kernel extension.

The package is fully functional without it (a pure-Python kernel is
selected at import time), so any build failure here downgrades to a
source-only install instead of aborting.
"""
import sys

from setuptools import setup


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    try:
        return cythonize(
            ["src/asmlc/_speedups.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # noqa: BLE001
        print(f"skipping compiled kernel: {exc}", file=sys.stderr)
        return []


setup(ext_modules=extensions())
