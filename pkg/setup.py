"""Build the optional compiled word kernel.

The extension is a twin of coxkit._wordops_py; if Cython or a compiler is
missing the package still installs and falls back to the pure kernel.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:   # noqa: BLE001
            print(f"warning: skipping compiled kernel ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:   # noqa: BLE001
            print(f"warning: skipping {ext.name} ({exc})")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("coxkit._wordops_c", ["src/coxkit/_wordops_c.pyx"])],
        language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
