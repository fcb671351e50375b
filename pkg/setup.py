"""Build the optional Cython search kernel.

The package works without it (``wqolen.kernel`` falls back to pure Python),
so building without Cython installed still works.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("wqolen._kernel", ["src/wqolen/_kernel.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
