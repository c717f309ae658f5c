#!/usr/bin/env python
"""Installation script for the POSS_ML package."""

from setuptools import setup, find_packages
# To use a consistent encoding
from codecs import open
from os import path
from os.path import join as pjoin
import glob

from setup_helpers import read_vars_from


# Read package information
info = read_vars_from(pjoin('poss_ml', 'info.py'))


this_directory = path.abspath(path.dirname(__file__))

poss_ml_readme_path = pjoin(this_directory, 'README.rst')
with open(poss_ml_readme_path, encoding='utf-8') as f:
    long_description = f.read()

with open(pjoin(this_directory, 'requirements.txt')) as f:
    required_dependencies = [line.split('#')[0].strip()
                             for line in f.read().splitlines()
                             if line.split('#')[0].strip() != '']

setup(
    name=info.NAME,
    version=info.VERSION,
    description=info.DESCRIPTION,
    long_description=long_description,
    long_description_content_type='text/x-rst',
    url=info.URL,
    license=info.LICENSE,
    author=info.AUTHOR,
    author_email=info.AUTHOR_EMAIL,
    classifiers=info.CLASSIFIERS,
    keywords=info.KEYWORDS,
    maintainer=info.MAINTAINER,
    provides=info.PROVIDES,
    packages=find_packages(exclude=['contrib', 'doc', 'tests']),
    python_requires='>=3.8',
    install_requires=required_dependencies,
    requires=info.REQUIRES,
    package_data={},
    data_files=[],
    entry_points={'console_scripts': ['possml = poss_ml.cli:main']},
    scripts=glob.glob("scripts_python/*.py")
)
