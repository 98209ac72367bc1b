"""Setup configuration for the QPU pulse-level simulator."""
from setuptools import find_packages, setup

setup(
    name="qpu-pulse-sim",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.9",
    install_requires=[
        "pydantic>=2.0.0",
        "pyyaml>=6.0.0",
        "click>=8.1.0",
        "python-dotenv>=1.0.0",
        "pandas>=2.0.0",
        "numpy>=1.24.0",
        "scipy>=1.11.0",
    ],
    entry_points={
        "console_scripts": [
            "qpu-sim=qpu_pulse_sim.cli.main:cli",
        ],
    },
    package_data={
        "qpu_pulse_sim": ["py.typed", "config/*.yaml"],
    },
)
