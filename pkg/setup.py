from setuptools import find_packages, setup

setup(
    name='egocluster',
    packages=find_packages(),
    version='0.1.0',
    description='EgoCluster: variance-targeting ego-cluster designs for randomized experiments '
                'on networks, with regression inference and a simulation lab.',
    keywords=['causal inference', 'network interference', 'experimental design', 'clustering'],
    package_data={
        'egocluster': ['configs/*.json']
    },
    install_requires=[
        'numpy>=1.17.0',
        'scipy>=1.4.0',
        'networkx>=2.7',
        'tqdm>=4.14.0',
        'jsonpickle>=0.9.4'
    ],
    extras_require={
        'tests': ['hypothesis>=6.0.0']
    },
    entry_points={
        'console_scripts': ['egocluster=egocluster.cli:main']
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',

        'Topic :: Scientific/Engineering :: Mathematics',

        'License :: OSI Approved :: Apache Software License',

        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10'
    ],
)
