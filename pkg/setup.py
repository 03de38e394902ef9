"""Builds the optional compiled kernel.

The package is pure Python except for bottsam._kernel._echelon_cy, a Cython
twin of the exact integer elimination kernel. If Cython or a C compiler is
missing the extension is skipped and the pure implementation is used at
runtime.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that degrades to the pure-Python kernel on any failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: compiled kernel skipped ({exc}); "
              "falling back to the pure-Python kernel")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("bottsam._kernel._echelon_cy",
                   ["src/bottsam/_kernel/_echelon_cy.pyx"])],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
