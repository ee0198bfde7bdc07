"""Build the optional Cython kernels; the package works without them."""

import os

import numpy as np
from setuptools import setup

ext_modules = []
if os.environ.get("DPBINOM_NO_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        np_random_lib = os.path.join(os.path.dirname(np.__file__), "random", "lib")
        ext_modules = cythonize(
            [
                Extension(
                    "dpbinom._kernels",
                    ["src/dpbinom/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    library_dirs=[np_random_lib],
                    libraries=["npyrandom"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
