import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("GAC_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("gac._canon_ext", ["src/gac/_canon_ext.pyx"],
                       extra_compile_args=["-O3"], optional=True)],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
