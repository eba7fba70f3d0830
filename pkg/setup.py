#!/usr/bin/env python3
"""
Install qlbdirac using setuptools
"""

from setuptools import find_packages, setup

with open('README.rst', 'r') as f:
    readme = f.read()

with open('qlbdirac/version.py', 'r') as f:
    version_string = None
    exec(f.read())
    assert version_string is not None


setup(
    name='qlbdirac',
    version=version_string,
    description='Quantum lattice Boltzmann solver for the Dirac equation',
    long_description=readme,

    install_requires=[
        'numpy>=1.17',
    ],
    zip_safe=False,
    license='BSD License',

    packages=find_packages(exclude=['tests', 'tests.*']),

    include_package_data=True,
    package_data={},

    entry_points={
        'console_scripts': [
            'qlbdirac = qlbdirac.cli:main',
        ],
    },

    classifiers=[
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Physics',
        'License :: OSI Approved :: BSD License',
    ],
)
