from setuptools import setup, find_packages

setup(
    name="polymeasure",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "examples*"]),
    install_requires=[
        "lark>=1.1.0",
        "numpy>=1.24",
        "scipy>=1.10",
        "SQLAlchemy>=2.0.0",
        "mcp[cli]>=1.3.0",
    ],
    entry_points={"console_scripts": ["polymeasure=polymeasure.cli:main"]},
    description="Polynomial functions of a density matrix estimated from measurements on copies",
    author="PolyMeasure Team",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.10",
)
