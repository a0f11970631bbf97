#!/usr/bin/env python3

"""
Setup file for treetransfer, exact geometry of compactified metric trees.
"""

from setuptools import setup


with open('requirements.txt') as f:
    requirements = f.read().splitlines()

setup(
    name='treetransfer',
    version='0.1.0',
    description='Exact dyadic geometry of compactified trees and their '
                '1-transfer certificates',
    long_description=open('README.md').read(),
    packages=['treetransfer', 'treetransfer.support'],
    package_data={'': ['json_schema/*.json']},
    include_package_data=True,
    zip_safe=False,
    install_requires=requirements,
    extras_require={'test': ['pytest~=7.4']},
    entry_points={
        'console_scripts': ['treetransfer=treetransfer.cli:main'],
    },
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.10',
    ],
)
