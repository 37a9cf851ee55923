from setuptools import setup, find_packages

setup(
    name="ratexp",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "examples*"]),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.11",
        "tqdm>=4.66.1",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "test": ["pytest>=7.4"],
    },
    entry_points={
        "console_scripts": [
            "ratexp=scripts.ratexp:main",
        ],
    },
    python_requires=">=3.9",
)
