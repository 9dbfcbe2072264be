"""
Copyright (c) 2019 The cocontagion developers
Released under the MIT license, see LICENSE.
"""

import io
from setuptools import setup

setup(
    name = "cocontagion",
    version = "0.1.0",
    author = "The cocontagion developers",
    description = ("Monte Carlo simulation of co-contagions with dormancy on \
        multiplex networks."),
    long_description=io.open('README.md', encoding='utf-8').read(),
    long_description_content_type="text/markdown",
    license = "MIT",
    packages=["cocontagion"],
    install_requires=['networkx >= 2.0',
        'numpy >= 1.17',
        'scipy >= 1.6',
    ],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "License :: OSI Approved :: MIT License",
    ],
    python_requires='>=3.8',
    entry_points={'console_scripts': ['cocontagion = cocontagion.__main__:main']},
    test_suite="tests"
)
