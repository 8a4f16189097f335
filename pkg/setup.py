import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off matters: the compiled kernel must produce bit-identical
# doubles to the numpy fallback, so FMA contraction of a*b+c is forbidden.
# Do NOT add -ffast-math for the same reason.
extensions = [
    Extension(
        "gaitmap._render_cy",
        ["src/gaitmap/_render_cy.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
