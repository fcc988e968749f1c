"""Build the optional compiled kernel.

The package works without it (symcone._kernels falls back to pure Python),
so a missing compiler or Cython only costs speed, never a failed install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/symcone/_kernels/_fast.pyx",
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - depends on build host
    print(f"symcone: building without compiled kernel ({exc})")

setup(ext_modules=ext_modules)
