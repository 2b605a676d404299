"""Build script: compiles the optional Cython kernel for exact row reduction.

The package is pure Python except for alexmod._kernels.qla_cy, a compiled
version of the fraction-free elimination routines in qla_py.  If Cython or a
C compiler is missing the build falls back to the pure implementation, which
is selected automatically at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "alexmod._kernels.qla_cy",
                ["src/alexmod/_kernels/qla_cy.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
