"""Build script for the optional compiled correlation kernel.

The package is pure Python plus one Cython extension for the hot
lag-search cross-correlation loop used by the multi-microphone defense
analyzer. The extension is optional: if Cython or a C compiler is
missing, the install degrades to the numpy fallback selected at import
time by photoninject._kernels.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Degrade to the pure-Python fallback when compilation fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: compiled kernel skipped ({exc}); "
                  "using the numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "using the numpy fallback")


extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "photoninject._kernels.ncc_cy",
                ["src/photoninject/_kernels/ncc_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    print("warning: Cython not available; using the numpy fallback")

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
