from setuptools import setup

setup(
    name="pyows",
    version="0.1",
    description="One-way sequences: private PAC learning and online learning experiments",
    author="pyows developers",
    license="MIT",
    packages=["pyows"],
    package_data={"pyows": ["data/*.txt"]},
    python_requires=">=3.8",
    install_requires=["numpy>=1.17", "scipy>=1.7"],
    tests_require=["pytest", "mock", "hypothesis", "tox"],
    entry_points={"console_scripts": ["pyows=pyows.cli:main"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering :: Mathematics",
    ]
)
