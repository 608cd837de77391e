# Builds the optional compiled closure kernel.  The package works without it
# (a pure-Python fallback is selected at import time), so any Cython or
# compiler failure here is non-fatal.
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mclex/_closure_c.pyx"],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except Exception as exc:  # pragma: no cover
    print(f"building without compiled kernel: {exc}")

setup(ext_modules=ext_modules)
