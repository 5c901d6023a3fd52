"""Fixed-target runtime analysis for black-box optimization benchmarks."""

__version__ = "0.1.0"
