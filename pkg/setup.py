"""Build script: compiles the closure-enumeration extension when Cython is present.

The package works without it (a pure-Python kernel is selected at import
time), so a missing compiler or missing Cython only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "conceptprobe.kernels._closure_c",
                ["src/conceptprobe/kernels/_closure_c.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
