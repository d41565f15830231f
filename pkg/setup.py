from setuptools import find_packages, setup

with open("requirements.txt") as file_to_read:
    REQUIRED = file_to_read.read().splitlines()

setup(
    py_modules=["__main__"],
    packages=find_packages(exclude=["tests"]),
    include_package_data=True,
    package_data={"curvgraph.file_converters": ["templates/*.html"]},
    install_requires=REQUIRED,
    entry_points={"console_scripts": ["curvgraph=curvgraph.curvgraph_cli:main"]},
)
