import os

from setuptools import Extension, setup

# THRESHOLD_LAB_NO_EXT=1 skips the compiled core; the package then runs on
# the pure-Python kernels.
ext_modules = []
if not os.environ.get("THRESHOLD_LAB_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "threshold_lab._kernels",
                ["src/threshold_lab/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
