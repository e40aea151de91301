"""Build script for the optional compiled IPFP kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so failure to build it is not fatal for source checkouts.
"""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "copulapmf._ipfp_cy",
                ["src/copulapmf/_ipfp_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
