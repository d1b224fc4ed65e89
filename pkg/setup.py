#!/usr/bin/env python3
"""
Setup script for Diagonal Copula Bounds
"""

from setuptools import setup, find_packages

# Read the README file
def read_readme():
    with open("README.md", "r", encoding="utf-8") as fh:
        return fh.read()

# Read requirements
def read_requirements(filename="requirements.txt"):
    with open(filename, "r", encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip() and not line.startswith(("#", "-r"))]

setup(
    name="diagonal-copula-bounds",
    version="1.0.0",
    author="Diagonal Copula Bounds Team",
    author_email="team@example.com",
    description="Exact upper and lower bounds, maximal asymmetry and sampling for copulas with a given diagonal section",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests"]),
    py_modules=["main"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"test": read_requirements("requirements-dev.txt")},
    entry_points={
        "console_scripts": [
            "diagcop=main:app",
        ],
    },
    include_package_data=True,
    zip_safe=False,
    keywords="copula, quasi-copula, diagonal section, asymmetry, dependence",
)
