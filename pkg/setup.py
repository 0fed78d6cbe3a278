from setuptools import setup, find_packages

setup(
    name="spnkit",
    version="0.1",
    description="Sum-product network engine: build, query, learn, sample, serialize and compile SPNs",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "scikit-learn>=1.3",
        "pandas>=2.0",
        "networkx>=3.1",
        "pyyaml>=6.0.1",
    ],
    extras_require={
        "test": ["pytest>=7.3.1"],
    },
    entry_points={
        'console_scripts': [
            'spnkit=spnkit.main:main',
        ],
    },
)
