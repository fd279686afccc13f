from setuptools import setup, find_namespace_packages

setup(
    name="arith-entanglement",
    install_requires=[
        'numpy',
        'scipy',
        'sympy'
    ],
    extras_require={
        'tests': [
            'pytest',
            'hypothesis'
        ]
    },
    description="Entanglement entropy of arithmetic Chern-Simons states over F_p",
    packages=find_namespace_packages(include=['titan.*', 'scripts.*']),
    entry_points={
        'console_scripts': [
            'arith_entanglement=scripts.titan.arith_entanglement.arith_entanglement:main',
        ]
    }
)
