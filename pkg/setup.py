"""Build the optional compiled integrator; the package works without it."""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PQSPEC_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("pqspec._kernel", ["src/pqspec/_kernel.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
