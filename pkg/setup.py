from setuptools import setup, find_packages

setup(
    name="keydance",
    version="0.1.0",
    description="Music-driven dance generation constrained by key poses",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    author="Keydance Team",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pydantic>=2.0.0",
        "PyYAML>=6.0",
        "click>=8.0.0",
    ],
    extras_require={
        "dev": [
            "pytest>=6.2.5",
            "pytest-asyncio>=0.21.0",
            "pytest-cov>=2.12.1",
            "factory_boy>=3.2.0",
            "Faker>=15.0.0",
            "black>=22.3.0",
            "isort>=5.10.1",
            "flake8>=4.0.1",
            "mypy>=0.950",
        ],
    },
    entry_points={
        "console_scripts": [
            "keydance=keydance.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Multimedia :: Graphics :: 3D Modeling",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ],
    keywords="dance-generation motion-synthesis transformer key-poses music",
)
