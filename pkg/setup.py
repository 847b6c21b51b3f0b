from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps mul+add from fusing into FMA so the compiled kernel
# stays bit-identical to the pure-Python fallback.
extensions = [
    Extension(
        "camsparse._kernels",
        ["src/camsparse/_kernels.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
