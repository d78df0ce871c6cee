import os

from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure-Python
# implementation in pekr._kernels.fallback when the extension is missing.
# Set PEKR_NO_EXT=1 to skip building it (e.g. on a machine without a C
# compiler, or to test the fallback path).
ext_modules = []
if os.environ.get("PEKR_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "pekr._kernels._speedups",
                    ["src/pekr/_kernels/_speedups.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
