"""
Setup configuration for Parallelism Tuner (parallelism-tuner package name).

Graph-width analysis, thread configuration recommendations, a scheduling
simulator and a thread-pool / MatMul lab for tuning inter-op pools, intra-op
threads and kernel threads of operator graphs.
"""

from setuptools import setup, find_packages

# Read README for long description
try:
    with open("README.md", "r", encoding="utf-8") as fh:
        long_description = fh.read()
except FileNotFoundError:
    long_description = "Parallelism Tuner - thread configuration tuning for operator graphs"

setup(
    name="parallelism-tuner",
    version="0.1.0",
    description="Inter-op / intra-op / kernel thread tuning and scheduling simulation for operator graphs",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Developers",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering",
        "Topic :: System :: Benchmark",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={
        "parallelism_tuner": ["data/graphs/*.json", "data/hw/*.json"],
    },
    python_requires=">=3.9",
    install_requires=[
        "pydantic>=2.0",
        "networkx>=3.0",
        "numpy>=1.24",
        "scipy>=1.10",
        "psutil>=5.9",
        "threadpoolctl>=3.1",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0",
            "pytest-cov>=4.0",
            "hypothesis>=6.0",
            "black>=23.0",
            "flake8>=6.0",
            "mypy>=1.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "partune=parallelism_tuner.cli:main",
        ],
    },
    keywords="thread pool, inter-op parallelism, intra-op parallelism, scheduling, simulation, amdahl",
    zip_safe=False,
)
