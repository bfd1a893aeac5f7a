from setuptools import find_packages, setup

with open("README.md") as fp:
    long_desc = fp.read()

exec(open("src/DecisionBoot/__init__.py").read())

setup(
    name="DecisionBoot",
    version=__version__,
    description="Decision-theoretic bootstrapping: robust ensemble weights and confidence intervals from a "
                "repeated zero-sum game",
    long_description=long_desc,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Natural Language :: English",
        "Operating System :: MacOS",
        "Operating System :: POSIX",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    package_dir={"": "src"},
    packages=find_packages(where="src", exclude=("DecisionBoot.Tests",)),
    package_data={"": ["*.json"]},
    include_package_data=True,
    entry_points={
        "console_scripts": ["dtb = DecisionBoot.Core:main_entry"],
    },
    install_requires=[
        "click",
        "numpy",
    ],
    python_requires=">=3.9",
)
