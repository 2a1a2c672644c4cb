"""Builds the optional compiled kernel extension; the package works without it."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "antmesh_sim._kernels",
                ["src/antmesh_sim/_kernels.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
