import os

from setuptools import Extension, setup

# DATAMARKET_NO_EXT=1 skips the compiled kernel; the package then runs on
# the pure-Python fallback selected at import time.
if os.environ.get("DATAMARKET_NO_EXT"):
    ext_modules = []
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("datamarket._bnb", ["src/datamarket/_bnb.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
