"""Build script for the optional compiled scoring kernels.

The package works without the extension (a pure-Python fallback is picked
at import time); building it just makes ROUGE scoring much faster on large
corpora. Installs that cannot compile C simply skip it.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "podsum._kernels",
                ["src/podsum/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
