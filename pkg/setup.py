"""A setup tools based setup module"""
from setuptools import setup

from fanbeam import __version__


def readme():
    """
    Return readme
    """
    with open('README.rst') as readme_file:
        return readme_file.read()


setup(
    name='fanbeam',
    version=__version__,
    description='Fan-beam CT geometry calibration and sparse-angle '
                'reconstruction.',
    long_description=readme(),
    classifiers=[
        'Development Status :: 4 - Beta',
        'License :: OSI Approved :: Apache Software License',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Image Processing',
    ],
    python_requires='>=3.7',
    keywords='tomography fan-beam calibration reconstruction cli',
    license='Apache',
    entry_points={
        'console_scripts': [
            'fanbeam = fanbeam.main:main',
        ],
    },
    packages=[
        'fanbeam',
        'fanbeam.calib',
        'fanbeam.cli',
        'fanbeam.commands',
        'fanbeam.exceptions',
        'fanbeam.projector',
        'fanbeam.recon',
    ],
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.6',
        'numba>=0.53',
    ],
    tests_require=['pytest', 'mock', 'testfixtures'],
    include_package_data=True,
    zip_safe=False
)
