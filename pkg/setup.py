import setuptools


with open("README.md", "r") as fh:
    long_description = fh.read()

install_requires = [
    'sympy>=1.9',
    'xmltodict>=0.12',
    'pydantic>=1.8,<2',
    'click>=7.1',
]

extras_require = {
    'test': ['pytest>=6'],
}


setuptools.setup(
    name="tazrp-tetra",
    version="0.1.0",
    author="BSGIP",
    description="Exact checks of the 3D R-operator and the n-species TAZRP "
                "steady state",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=['tests', 'scripts']),
    classifiers=[
    ],
    python_requires='>=3.8',
    install_requires=install_requires,
    extras_require=extras_require,
    entry_points={
        'console_scripts': ['tazrp=tazrp_tetra.cli:main'],
    },
)
