from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "kla._kla",
    sources=[
        "src/intlattice.cpp",
        "src/expr.cpp",
        "src/groupcat.cpp",
        "src/assembly.cpp",
        "src/oracles.cpp",
        "python/bindings.cpp",
    ],
    include_dirs=["include", "vendor"],
    libraries=["gmpxx", "gmp"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
