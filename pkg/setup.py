"""Build script: compiles the optional BPE merge kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so any compile failure downgrades to a warning instead of
aborting the install.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the C kernel if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: building the compiled BPE kernel failed ({exc}); "
            "leanpairs will use the pure-Python kernel.",
            file=sys.stderr,
        )


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "leanpairs.tokenizer._bpe_core",
                ["src/leanpairs/tokenizer/_bpe_core.pyx"],
            )
        ],
        language_level="3",
    )


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
