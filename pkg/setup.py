"""Build script: compiles the optional _speedups extension when Cython is available.

The package works without the extension (pure-Python fallbacks are selected at
import time); the compiled core is only needed to hit the runtime budgets of
the large exhaustive sweeps.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "rainbowcycles._speedups",
                ["src/rainbowcycles/_speedups.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
