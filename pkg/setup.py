import os

import numpy as np
from setuptools import Extension, setup

extra = ["/O2"] if os.name == "nt" else ["-O3"]

ext_modules = []
if os.environ.get("TEMPOVAD_NO_EXT") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tempovad._kernels",
                ["src/tempovad/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=extra,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
