from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tworuin._speedups",
                ["src/tworuin/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-Python install: the package falls back to the reference kernels.
    ext_modules = []

setup(ext_modules=ext_modules)
