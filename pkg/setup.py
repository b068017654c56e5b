"""Build script: compiles the optional edit-distance speedup extension.

The package works without the extension (litmine._fuzzy_py is the
fallback), so a missing compiler or Cython only costs speed, never a
failed install.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compile failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken toolchain, ...
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: building litmine._fuzzy failed ({exc}); "
            "falling back to the pure-Python matcher",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "litmine._fuzzy",
                sources=["src/litmine/_fuzzy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
