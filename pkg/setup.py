from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [Extension("coinfree._speedups", ["src/coinfree/_speedups.pyx"])],
        language_level=3,
    )
)
