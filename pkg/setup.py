import os

from setuptools import Extension, setup

PYX = os.path.join(os.path.dirname(__file__), "src", "liedescent", "_kernel_c.pyx")

ext_modules = []
if not os.environ.get("LIEDESCENT_SKIP_EXT") and os.path.exists(PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "liedescent._kernel_c",
                    ["src/liedescent/_kernel_c.pyx"],
                    optional=True,
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython available: the package runs on the pure-Python kernels.
        ext_modules = []

setup(ext_modules=ext_modules)
