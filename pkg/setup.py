import setuptools

with open("Readme.md", "r") as fh:
    long_description = fh.read()

with open('requirements.txt') as f:
    required = f.read().splitlines()

version = {}
with open('irs_parafac/version.py') as f:
    exec(f.read(), version)

setuptools.setup(
    name="irs-parafac",
    version=version["__version__"],
    author="BlaizeTech",
    author_email="info@blaize.tech",
    description="PARAFAC-based channel estimation for IRS-assisted MIMO systems",
    include_package_data=True,
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="",
    packages=setuptools.find_packages(),
    package_data={"irs_parafac": ["presets.json", "tests/*.toml"]},
    install_requires=required,
    extras_require={
        "dev": ["autopep8>=1.5.4", "isort>=5.4.2", "pycodestyle>=2.6.0", "pylint>=2.6.0"],
    },
    entry_points={
        "console_scripts": ["irs-parafac=irs_parafac.cli:main"],
    },
    classifiers=[
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: Unix",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering"

    ],
    python_requires='>=3.8',
)
