"""Build script for the optional compiled kernels.

The package works without them (a numpy fallback is selected at import);
set WEAKCONLEY_NO_EXT=1 to skip the build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("WEAKCONLEY_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        print("Cython or numpy missing: building without compiled kernels")
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "weakconley._kernels._ckernels",
                    ["src/weakconley/_kernels/_ckernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
