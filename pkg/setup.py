import io
from setuptools import setup, find_packages


def read_file(filename, **kwargs):
    encoding = kwargs.get("encoding", "utf-8")

    with io.open(filename, encoding=encoding) as f:
        return f.read()

with open("oirl/version.py", "r") as f:
    exec(f.read())

setup(
    name="oirl",
    version=__version__,
    packages=find_packages(exclude=["tests", "tests.*"]),

    # Metadata for PyPi
    author="The oirl Authors",
    description="Online inverse reinforcement learning for systems with "
                "unknown dynamics",
    long_description=read_file("README.rst"),
    license="GPLv2",
    classifiers=[
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",

        "License :: OSI Approved :: GNU General Public License v2 (GPLv2)",

        "Operating System :: POSIX :: Linux",
        "Operating System :: Microsoft :: Windows",
        "Operating System :: MacOS",

        "Programming Language :: Python :: 3",

        "Topic :: Scientific/Engineering",
    ],
    keywords="inverse reinforcement learning system identification "
             "concurrent learning",

    # Requirements
    install_requires=["numpy>=1.13", "scipy>=1.6", "six", "sentinel",
                      "enum-compat"],

    # Scripts
    entry_points={
        "console_scripts": [
            "oirl-experiment = oirl.scripts.oirl_experiment:main",
        ],
    }
)
