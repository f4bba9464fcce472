"""Build script for the compiled convolution/pooling kernels.

The extension is optional: if Cython or a C compiler is unavailable the
package installs anyway and falls back to the numpy kernels at import time.

    python setup.py build_ext --inplace
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "tae.kernels._cykernels",
                ["src/tae/kernels/_cykernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
