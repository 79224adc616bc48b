"""Build script for PyPI."""

from pathlib import Path

import setuptools

import webtiles

HERE = Path(__file__).parent

with (HERE / 'README.md').open('rt', encoding='utf-8') as f:
    LONG_DESCRIPTION = f.read()

with (HERE / 'requirements.txt').open('rt', encoding='utf-8') as f:
    INSTALL_REQUIRES = [line.strip() for line in f]

setuptools.setup(
    name='WebTiles',
    version=webtiles.__version__,
    description='Compressed web graphs with random access to successors and predecessors',
    long_description=LONG_DESCRIPTION,
    long_description_content_type='text/markdown',
    packages=['webtiles', 'webtiles.core'],
    entry_points={
        'console_scripts': ['webtiles = webtiles.cli:main'],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Information Analysis',
    ],
    license='Apache 2.0',
    keywords=['web graph', 'graph compression', 'adjacency', 'deflate', 'benchmark'],
    platforms=['any'],
    python_requires='>=3.7',
    install_requires=INSTALL_REQUIRES,
)
