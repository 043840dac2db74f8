"""Builds the optional compiled kernels.

The package is fully functional without the extension: mesofringe.kernels
falls back to the pure NumPy implementations when the import fails.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "mesofringe._kernels_cy",
                ["src/mesofringe/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
