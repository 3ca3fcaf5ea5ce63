from setuptools import setup
import os

this_dir = os.path.abspath(os.path.dirname(__file__))
description = ("supermoduli computes with genus zero super Riemann "
               "surfaces, their moduli and super stable maps")
long_description = None
try:
    with open(os.path.join(this_dir, "README.md"), "rb") as f:
        long_description = f.read().decode("utf-8")
except IOError:
    long_description = description

about = {}
# Get the package version from the supermoduli/__version__.py file
with open(os.path.join(this_dir, "supermoduli", "__version__.py"), "rb") as f:
    exec(f.read().decode("utf-8"), about)
VERSION = about["__version__"]

addl_args = {
    "packages": ["supermoduli", "supermoduli.commands"],
    "entry_points": {
        "console_scripts": [
            "supermoduli = supermoduli.core:run_exit",
        ]
    },
}

setup(
    name="supermoduli",
    version=VERSION,
    description=description,
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="GNU LGPL",
    keywords="grassmann superconformal moduli stable-maps geodesics",
    package_data={"": ["*.txt"]},
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "networkx>=2.6",
        "sympy>=1.9",
    ],
    extras_require={
        "test": ["pynose"],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: GNU Library or "
        "Lesser General Public License (LGPL)",
        "Natural Language :: English",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    **addl_args
)
