"""Build script: compiles the optional accelerator extension.

The package works without the extension (pure-numpy kernels are selected at
import time); if compilation fails for any reason the build continues and the
wheel simply ships without `uqdbench._kernels`.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, bad toolchain, ...
            print(f"uqdbench: compiled kernels skipped ({exc}); "
                  f"the pure-numpy backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"uqdbench: building {ext.name} failed ({exc}); "
                  f"the pure-numpy backend will be used")


# The numpy and compiled backends must produce bit-identical results, so the
# compiler may neither fuse a*b+c into FMA (-ffp-contract=off) nor merge
# cos/sin pairs into glibc's sincos, which rounds differently (-fno-builtin;
# the narrower -fno-builtin-sincos does not stop gcc's cse_sincos pass).
extensions = [
    Extension(
        "uqdbench._kernels",
        ["src/uqdbench/_kernels.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off", "-fno-builtin"],
    )
]

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
