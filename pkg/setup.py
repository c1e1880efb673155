from setuptools import setup, find_packages

VERSION = '0.1.0'
DESCRIPTION = 'Thermal two-mode entanglement under phase decoherence & quantum erasure'
LONG_DESCRIPTION = 'Closed-form dynamics of the two-mode two-photon Jaynes-Cummings model with phase decoherence, ' \
                   'quantum erasure of the atom, thermal mixing & log-negativity sweeps from the command line'

setup(
    name='erasent',
    version=VERSION,
    license='MIT',
    description=DESCRIPTION,
    long_description=LONG_DESCRIPTION,
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    include_package_data=True,
    python_requires='>=3.8',
    install_requires=[
        'click',  # for the command line & ANSI styling
        'rich',  # for ANSI styling
        'numpy', 'pandas',
        'scipy',  # for log-space series weights & tridiagonal eigenvalues
        'tqdm', 'icecream'
    ],
    extras_require={
        'tests': ['pytest', 'hypothesis'],
    },
    entry_points={
        'console_scripts': ['erasent=erasent.cli:main'],
    },
    keywords=[
        'python',
        'quantum-optics', 'jaynes-cummings', 'decoherence', 'entanglement', 'log-negativity', 'quantum-eraser'
    ],
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Operating System :: POSIX :: Linux',
        'Operating System :: Unix',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Physics',
    ]
)
